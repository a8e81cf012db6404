"""Pfaffian of complex skew-symmetric matrices.

Parlett-Reid style skew tridiagonalization with partial pivoting: congruence
transforms by unit-determinant eliminations reduce the matrix two rows and
columns at a time, accumulating Pf(A) = prod of the (k, k+1) pivots times
(-1)^{#swaps}.  O(m^3), no square-root sign ambiguity.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import DimensionError, SkewSymmetryWarning

__all__ = ["SkewMatrix", "pfaffian"]


class SkewMatrix:
    """A complex skew-symmetric matrix, antisymmetrized on construction.

    Asymmetry beyond ``warn_tol`` times the largest entry magnitude is
    reported through :class:`SkewSymmetryWarning`; the stored entries are
    always exactly (A - A^T)/2.
    """

    def __init__(self, entries, warn_tol: float = 1e-10):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] % 2 != 0:
            raise DimensionError(
                f"Pfaffian needs even dimension, got {a.shape[0]} "
                "(odd-dimensional skew matrices have Pf = 0 by convention "
                "but are rejected here)"
            )
        scale = np.max(np.abs(a)) if a.size else 0.0
        asym = np.max(np.abs(a + a.T)) if a.size else 0.0
        if scale > 0 and asym > warn_tol * scale:
            warnings.warn(
                f"input deviates from skew symmetry by {asym:.3e} "
                f"(relative {asym / scale:.3e}); antisymmetrizing",
                SkewSymmetryWarning,
                stacklevel=2,
            )
        self.entries = 0.5 * (a - a.T)
        self.dim = a.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries.copy()
        return self.entries.astype(dtype)


def pfaffian(a) -> complex:
    """Pfaffian of a skew-symmetric matrix (array-like or SkewMatrix)."""
    if not isinstance(a, SkewMatrix):
        a = SkewMatrix(a)
    m = a.entries.copy()
    dim = a.dim
    if dim == 0:
        return 1.0 + 0.0j
    pf = 1.0 + 0.0j
    for k in range(0, dim - 2, 2):
        # pivot: largest |m[k, i]| for i > k, moved into position k+1
        col = np.abs(m[k, k + 1 :])
        i = int(np.argmax(col)) + k + 1
        if col[i - k - 1] == 0.0:
            return 0.0 + 0.0j
        if i != k + 1:
            m[[k + 1, i], :] = m[[i, k + 1], :]
            m[:, [k + 1, i]] = m[:, [i, k + 1]]
            pf = -pf
        pivot = m[k, k + 1]
        pf *= pivot
        # eliminate row/col k and k+1 beyond position k+1 with unit-determinant
        # congruences: col_j -= f_j col_{k+1} kills m[k, j]; then
        # col_j -= g_j col_k kills m[k+1, j] without reintroducing m[k, j].
        f = m[k, k + 2 :] / pivot
        m[k + 2 :, :] -= np.outer(f, m[k + 1, :])
        m[:, k + 2 :] -= np.outer(m[:, k + 1], f)
        g = m[k + 1, k + 2 :] / (-pivot)
        m[k + 2 :, :] -= np.outer(g, m[k, :])
        m[:, k + 2 :] -= np.outer(m[:, k], g)
    pf *= m[dim - 2, dim - 1]
    return complex(pf)
