"""Monge matrix kernels: SMAWK row minima, min-plus products, semigroup.

Matrices are dense int64 numpy arrays.  Vector entries may carry the
INF_I64 sentinel (from ``_kernels``); anything at or above INF_CUT is
treated as unreachable.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ._kernels import INF_I64, minplus_values

INF_CUT = int(INF_I64) >> 1

#: Below this p*q, a broadcast scan beats SMAWK's per-probe overhead.
_DENSE_LIMIT = 1 << 17


def is_monge(M) -> bool:
    """True iff every 2x2 minor satisfies the Monge inequality."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError("matrix expected")
    if M.shape[0] < 2 or M.shape[1] < 2:
        return True
    lhs = M[:-1, :-1] + M[1:, 1:]
    rhs = M[:-1, 1:] + M[1:, :-1]
    return bool((lhs <= rhs).all())


def smawk_row_minima(
    nrows: int, ncols: int, entry: Callable[[int, int], int]
) -> tuple[list[int], list[int]]:
    """Row minima of a totally monotone matrix given by an entry oracle.

    Returns (values, leftmost argmin columns) using O(nrows + ncols)
    probes.  Ties break toward the smaller column index.
    """
    if nrows == 0 or ncols == 0:
        return [], []
    vals: list = [None] * nrows
    args: list = [None] * nrows

    def solve(rows: list[int], cols: list[int]) -> None:
        if not rows:
            return
        if len(cols) > len(rows):
            reduced: list[int] = []
            for c in cols:
                while reduced and entry(rows[len(reduced) - 1], reduced[-1]) > entry(
                    rows[len(reduced) - 1], c
                ):
                    reduced.pop()
                if len(reduced) < len(rows):
                    reduced.append(c)
            cols = reduced
        if len(rows) == 1:
            r = rows[0]
            best, bc = entry(r, cols[0]), cols[0]
            for c in cols[1:]:
                v = entry(r, c)
                if v < best:
                    best, bc = v, c
            vals[r], args[r] = best, bc
            return
        solve(rows[1::2], cols)
        ci = 0
        for i in range(0, len(rows), 2):
            r = rows[i]
            hi = args[rows[i + 1]] if i + 1 < len(rows) else cols[-1]
            best, bc = entry(r, cols[ci]), cols[ci]
            while cols[ci] != hi:
                ci += 1
                v = entry(r, cols[ci])
                if v < best:
                    best, bc = v, cols[ci]
            vals[r], args[r] = best, bc
        return

    solve(list(range(nrows)), list(range(ncols)))
    return vals, args


def minplus(A, B) -> np.ndarray:
    """Min-plus product of two finite Monge matrices; the result is Monge."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.ndim != 2 or B.ndim != 2:
        raise ValueError("matrices expected")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} x {B.shape}")
    return minplus_values(A, B)


def vec_minplus(v, M) -> tuple[np.ndarray, np.ndarray]:
    """out[j] = min_i v[i] + M[i][j] with leftmost witnesses.

    Entries of ``v`` at or above INF_CUT are treated as +inf and excluded
    (dropping rows preserves the Monge property of the rest).  Fully
    unreachable columns come back as INF_I64 with witness -1.
    """
    v = np.asarray(v, dtype=np.int64)
    if callable(M):
        p, q = M.shape  # entry-oracle view must expose .shape
        get = M
        dense = None
    else:
        dense = np.asarray(M, dtype=np.int64)
        p, q = dense.shape
        get = None
    if len(v) != p:
        raise ValueError(f"vector length {len(v)} != rows {p}")
    alive = np.flatnonzero(v < INF_CUT)
    out = np.full(q, INF_I64, dtype=np.int64)
    wit = np.full(q, -1, dtype=np.int64)
    if len(alive) == 0:
        return out, wit
    if dense is not None and len(alive) * q <= _DENSE_LIMIT:
        sums = v[alive, None] + dense[alive, :]
        pos = np.argmin(sums, axis=0)
        out[:] = sums[pos, np.arange(q)]
        wit[:] = alive[pos]
        return out, wit
    if dense is not None:
        ent = lambda j, ii: int(v[alive[ii]]) + int(dense[alive[ii], j])
    else:
        ent = lambda j, ii: int(v[alive[ii]]) + int(get(int(alive[ii]), j))
    vals, argrows = smawk_row_minima(q, len(alive), ent)
    out[:] = vals
    wit[:] = alive[np.asarray(argrows)]
    return out, wit


# ---------------------------------------------------------------------------
# k-restricted Monge multiplication semigroup


class _Absorbing:
    """The absorbing element of the restricted multiplication semigroup."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "Z"


Z = _Absorbing()

SemiElem = object  # Z or a 2-D int64 ndarray with both dims <= cap


def sem_mul(a: SemiElem, b: SemiElem, cap: int) -> SemiElem:
    """Product in the cap-restricted semigroup; incompatible inputs give Z."""
    if a is Z or b is Z:
        return Z
    if max(a.shape) > cap or max(b.shape) > cap:
        return Z
    if a.shape[1] != b.shape[0]:
        return Z
    return minplus_values(a, b)
