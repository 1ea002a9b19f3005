"""
Local Crouzeix-Raviart shape functions on one triangle, in barycentric coordinates.

Slot layout per cell (nb = (k - 1)(k - 2) / 2):

    odd k:  [facet bubble f0, f1, f2] [facet modal f, j = 1..k-1] [bulk modal] 
    even k: [vertex 0, 1, 2]          [facet modal f, j = 1..k-1] [bulk modal] [bulk bubble]

Facet f is opposite local vertex f. Facet modal functions read
lambda_a lambda_b S_{j-1}(lambda_b - lambda_a) with a the endpoint of lower
global index, so both cells sharing a facet see the same trace.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from app.constants import BasisKind
from app.exceptions import InvalidArgumentError
from polybasis.legendre import legendre_table


def bulk_exponents(k: int) -> List[Tuple[int, int]]:
    """Exponents (a, b) of lambda_1^a lambda_2^b, a + b <= k - 3."""
    return [(d - b, b) for d in range(k - 2) for b in range(d + 1)]


@dataclass(frozen=True)
class LocalLayout:
    k: int

    @property
    def even(self) -> bool:
        return self.k % 2 == 0

    @property
    def n_modal(self) -> int:
        return self.k - 1

    @property
    def n_bulk(self) -> int:
        return (self.k - 1) * (self.k - 2) // 2

    @property
    def modal_start(self) -> int:
        return 3

    def modal_slot(self, facet: int, j: int) -> int:
        return 3 + facet * self.n_modal + (j - 1)

    @property
    def bulk_start(self) -> int:
        return 3 + 3 * self.n_modal

    @property
    def bubble_slot(self) -> int:
        return self.bulk_start + self.n_bulk

    @property
    def n_local(self) -> int:
        return self.bulk_start + self.n_bulk + (1 if self.even else 0)

    def slot_kind(self, slot: int) -> BasisKind:
        if slot < 3:
            return BasisKind.LAGRANGE_VERTEX if self.even else BasisKind.FACET_BUBBLE
        if slot < self.bulk_start:
            return BasisKind.LAGRANGE_FACET_MODAL
        if slot < self.bulk_start + self.n_bulk:
            return BasisKind.LAGRANGE_BULK_MODAL
        return BasisKind.BULK_BUBBLE


@lru_cache(maxsize=None)
def local_layout(k: int) -> LocalLayout:
    if int(k) != k or k < 1:
        raise InvalidArgumentError(f"CR order must be an integer >= 1, got {k}")
    return LocalLayout(int(k))


def facet_flips(cells: np.ndarray) -> np.ndarray:
    """(T, 3) True where local facet f runs from a higher to a lower global vertex."""
    return np.stack([cells[:, (f + 1) % 3] > cells[:, (f + 2) % 3] for f in range(3)], axis=1)


def evaluate_local(k: int, lam: np.ndarray, flips: np.ndarray, derivatives: bool = False):
    """
    Values (n, n_local, nq) of every local function at barycentric points
    lam (n, nq, 3); with derivatives=True also d/d lambda_i, shape (n, n_local, nq, 3).
    """
    layout = local_layout(k)
    lam = np.asarray(lam, dtype=float)
    n, nq, _ = lam.shape
    values = np.zeros((n, layout.n_local, nq))
    dlam = np.zeros((n, layout.n_local, nq, 3)) if derivatives else None

    if layout.even:
        for i in range(3):
            values[:, i] = lam[..., i]
            if derivatives:
                dlam[:, i, :, i] = 1.0
    else:
        s_vals, s_ders = legendre_table(k, 1.0 - 2.0 * lam)
        for f in range(3):
            values[:, f] = s_vals[k][..., f]
            if derivatives:
                dlam[:, f, :, f] = -2.0 * s_ders[k][..., f]

    if layout.n_modal:
        rows = np.arange(n)
        for f in range(3):
            first, second = (f + 1) % 3, (f + 2) % 3
            lo = np.where(flips[:, f], second, first)
            hi = np.where(flips[:, f], first, second)
            la = lam[rows, :, lo]
            lb = lam[rows, :, hi]
            p_vals, p_ders = legendre_table(layout.n_modal - 1, lb - la)
            for j in range(1, layout.n_modal + 1):
                slot = layout.modal_slot(f, j)
                p, dp = p_vals[j - 1], p_ders[j - 1]
                values[:, slot] = la * lb * p
                if derivatives:
                    d_a = lb * p - la * lb * dp
                    d_b = la * p + la * lb * dp
                    dlam[rows, slot, :, lo] += d_a
                    dlam[rows, slot, :, hi] += d_b

    l0, l1, l2 = lam[..., 0], lam[..., 1], lam[..., 2]
    for offset, (a, b) in enumerate(bulk_exponents(k)):
        slot = layout.bulk_start + offset
        p1 = l1 ** (a + 1)
        p2 = l2 ** (b + 1)
        values[:, slot] = l0 * p1 * p2
        if derivatives:
            dlam[:, slot, :, 0] = p1 * p2
            dlam[:, slot, :, 1] = (a + 1) * l0 * l1**a * p2
            dlam[:, slot, :, 2] = (b + 1) * l0 * p1 * l2**b

    if layout.even:
        s_vals, s_ders = legendre_table(k, 1.0 - 2.0 * lam)
        values[:, layout.bubble_slot] = 0.5 * (-1.0 + s_vals[k].sum(axis=-1))
        if derivatives:
            dlam[:, layout.bubble_slot] = -s_ders[k]

    if derivatives:
        return values, dlam
    return values


def physical_gradients(dlam: np.ndarray, grad_lambda: np.ndarray) -> np.ndarray:
    """(n, n_local, nq, 3) lambda-derivatives and (n, 3, 2) gradients -> (n, n_local, nq, 2)."""
    return np.einsum("nlqi,nid->nlqd", dlam, grad_lambda)
