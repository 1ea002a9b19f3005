import pathlib
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import pandas as pd

from app.constants import __version__

CSV_FLOAT_FORMAT = "%.15e"


def write_csv(frame: pd.DataFrame, path: pathlib.Path) -> pathlib.Path:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path


def format_frame(frame: pd.DataFrame) -> str:
    if frame.empty:
        return "(no rows)"
    return frame.to_string(index=False, float_format=lambda value: f"{value:.4e}")


def case_notes(records: Iterable[Dict[str, Any]]) -> List[str]:
    """Deviation notes of the manufactured cases, first occurrence order."""
    seen = []
    for record in records:
        for note in record.get("notes", ()):
            if note not in seen:
                seen.append(note)
    return seen


def failures(records: Iterable[Dict[str, Any]]) -> List[str]:
    lines = []
    for r in records:
        if r["error"] is not None:
            lines.append(f"k={r['k']} alpha={r['alpha']} beta={r['beta']} omega={r['omega']} nx={r['nx']}: {r['error']}")
        elif not r["converged"]:
            lines.append(
                f"k={r['k']} alpha={r['alpha']} beta={r['beta']} omega={r['omega']} nx={r['nx']}: "
                f"no convergence after {r['iterations']} iterations"
            )
    return lines


def write_report(path: pathlib.Path, title: str, sections: Sequence[Tuple[str, str]]) -> pathlib.Path:
    lines = [f"{title} (cr-forchheimer {__version__})", "=" * 72, ""]
    for heading, body in sections:
        lines += [heading, "-" * len(heading), body.rstrip() or "(none)", ""]
    path.write_text("\n".join(lines), encoding="utf-8")
    return path
