import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


@dataclass
class Config:
    THREADS: int = _int_env("CR_FORCHHEIMER_THREADS", os.cpu_count() or 1)
    LOG_LEVEL: str = os.getenv("CR_FORCHHEIMER_LOG_LEVEL", "INFO")
    OUTPUT_DIR: str = os.getenv("CR_FORCHHEIMER_OUTPUT_DIR", "results")
