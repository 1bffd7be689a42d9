"""Ground-truth computations: bounded/unbounded DPs and per-source searches.

Everything here is deliberately naive and independent of the production
data structures; property tests check the fast paths against these.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ._kernels import INF_I64, banded_unit_dp, banded_weighted_dp
from .core import INF, Symbols, Weight, WeightTable, symbols

_ARR = lambda s: symbols(s) if not isinstance(s, np.ndarray) else s


# ---------------------------------------------------------------------------
# Bounded weighted edit distance (banded DP with traceback)


def ed_bounded(
    X, Y, k: int, w: WeightTable, *, want_alignment: bool = True
) -> tuple[Weight, list[tuple[int, int]] | None]:
    """ed^w(X, Y) and a w-optimal alignment if <= k units, else (inf, None).

    The DP is restricted to the diagonal band |x - y| <= k intersected
    with |x - y - (|X| - |Y|)| <= k; any alignment of cost <= k stays
    inside it because every non-diagonal edge costs at least one unit.
    """
    X, Y = _ARR(X), _ARR(Y)
    n, m = len(X), len(Y)
    if k < 0 or abs(n - m) > k:
        return INF, None
    budget = k * w.den
    width = 2 * k + 1
    diff = n - m

    def bounds(y: int) -> tuple[int, int]:
        return max(0, y - k, y + diff - k), min(n, y + k, y + diff + k)

    fast = banded_weighted_dp(X, Y, w.cells, w.eps, k, w.den)
    if fast is not None:
        rows, los = fast
        lo_m = int(los[m])
        off = n - lo_m
        val = int(rows[m, off]) if 0 <= off < width else int(INF_I64)
        if val > budget:
            return INF, None
        if not want_alignment:
            return val, None
        return val, _traceback(X, Y, w, rows, los)

    del_pre = np.concatenate(([0], np.cumsum(w.cells[X, w.eps]))) if n else np.zeros(1, np.int64)
    rows = np.full((m + 1, width), INF_I64, dtype=np.int64)
    lo0, hi0 = bounds(0)
    rows[0, : hi0 - lo0 + 1] = del_pre[lo0 : hi0 + 1] - del_pre[lo0]
    los = [lo0]
    for y in range(1, m + 1):
        lo, hi = bounds(y)
        los.append(lo)
        plo = los[y - 1]
        span = hi - lo + 1
        cur = np.full(width, INF_I64, dtype=np.int64)
        prev = rows[y - 1]
        ins_cost = int(w.cells[w.eps, Y[y - 1]])
        # vertical arm
        shift = lo - plo
        take = min(width - shift, span) if shift < width else 0
        if take > 0:
            np.minimum(cur[:take], prev[shift : shift + take] + ins_cost, out=cur[:take])
        # diagonal arm
        xs0 = max(lo, 1)
        if xs0 <= hi:
            pxs = np.arange(xs0 - 1, hi) - plo
            ok = (pxs >= 0) & (pxs < width)
            if ok.any():
                diag = np.full(hi - xs0 + 1, INF_I64, dtype=np.int64)
                sub_costs = w.cells[X[xs0 - 1 : hi], Y[y - 1]]
                vals = prev[pxs[ok]]
                good = vals < INF_I64
                sel = np.where(good, vals + sub_costs[ok], INF_I64)
                diag[ok] = sel
                np.minimum(cur[xs0 - lo : hi - lo + 1], diag, out=cur[xs0 - lo : hi - lo + 1])
        # horizontal arm: prefix-min with additive delete costs
        base = del_pre[lo : hi + 1]
        acc = np.minimum.accumulate(cur[:span] - base)
        cur[:span] = acc + base
        rows[y] = cur
    lo_m, hi_m = bounds(m)
    if not (lo_m <= n <= hi_m):
        return INF, None
    val = int(rows[m, n - lo_m])
    if val > budget:
        return INF, None
    if not want_alignment:
        return val, None
    return val, _traceback(X, Y, w, rows, los)


def _traceback(X, Y, w, rows, los) -> list[tuple[int, int]]:
    n, m = len(X), len(Y)
    width = rows.shape[1]

    def cell(y, x):
        off = x - los[y]
        if 0 <= off < width:
            v = rows[y][off]
            return int(v) if v < INF_I64 else None
        return None

    pairs: list[tuple[int, int]] = [(n, m)]
    x, y = n, m
    while (x, y) != (0, 0):
        here = cell(y, x)
        emitted = None
        if x > 0 and y > 0:
            d = cell(y - 1, x - 1)
            if d is not None and d + w.sub(int(X[x - 1]), int(Y[y - 1])) == here:
                if X[x - 1] != Y[y - 1]:
                    emitted = (x - 1, y - 1)
                x, y = x - 1, y - 1
                if emitted:
                    pairs.append(emitted)
                continue
        if x > 0:
            d = cell(y, x - 1)
            if d is not None and d + w.delete(int(X[x - 1])) == here:
                pairs.append((x - 1, y))
                x -= 1
                continue
        d = cell(y - 1, x)
        assert y > 0 and d is not None and d + w.insert(int(Y[y - 1])) == here
        pairs.append((x, y - 1))
        y -= 1
    if pairs[-1] != (0, 0):
        pairs.append((0, 0))
    pairs.reverse()
    return pairs


def ed_full(X, Y, w: WeightTable) -> int:
    """Unbounded ed^w by full quadratic DP (value only)."""
    X, Y = _ARR(X), _ARR(Y)
    n, m = len(X), len(Y)
    del_pre = np.concatenate(([0], np.cumsum(w.cells[X, w.eps]))) if n else np.zeros(1, np.int64)
    prev = del_pre.copy()
    for y in range(1, m + 1):
        ins_cost = int(w.cells[w.eps, Y[y - 1]])
        cur = np.empty(n + 1, dtype=np.int64)
        cur[0] = prev[0] + ins_cost
        if n:
            diag = prev[:-1] + w.cells[X, Y[y - 1]]
            cur[1:] = np.minimum(prev[1:] + ins_cost, diag)
        acc = np.minimum.accumulate(cur - del_pre)
        cur = acc + del_pre
        prev = cur
    return int(prev[n])


def unit_alignment(Y, Yp, k: int) -> tuple[int, list[tuple[int, int]]] | None:
    """Unweighted ed(Y, Y') <= k with an optimal alignment, else None."""
    Y, Yp = _ARR(Y), _ARR(Yp)
    n, m = len(Y), len(Yp)
    if abs(n - m) > k:
        return None
    dp, lo = banded_unit_dp(Y, Yp, k)
    off = n - int(lo[m])
    if not 0 <= off < dp.shape[1] or dp[m, off] > k:
        return None
    val = int(dp[m, off])
    width = dp.shape[1]

    def cell(y, x):
        o = x - int(lo[y])
        if 0 <= o < width:
            v = dp[y, o]
            return int(v) if v < INF_I64 else None
        return None

    pairs = [(n, m)]
    x, y = n, m
    while (x, y) != (0, 0):
        here = cell(y, x)
        if x > 0 and y > 0:
            d = cell(y - 1, x - 1)
            if d is not None and d + (0 if Y[x - 1] == Yp[y - 1] else 1) == here:
                if Y[x - 1] != Yp[y - 1]:
                    pairs.append((x - 1, y - 1))
                x, y = x - 1, y - 1
                continue
        if x > 0:
            d = cell(y, x - 1)
            if d is not None and d + 1 == here:
                pairs.append((x - 1, y))
                x -= 1
                continue
        d = cell(y - 1, x)
        assert y > 0 and d is not None and d + 1 == here
        pairs.append((x, y - 1))
        y -= 1
    if pairs[-1] != (0, 0):
        pairs.append((0, 0))
    pairs.reverse()
    return val, pairs


# ---------------------------------------------------------------------------
# Augmented alignment graph: brute boundary matrices


@dataclass(frozen=True)
class AugGridSpec:
    """One rectangle of the augmented alignment graph.

    Every forward edge gets a reverse twin of cost ``W + 1`` in numerator
    units, the smallest value strictly above any finite edge cost.
    """

    X: Symbols
    Y: Symbols
    w: WeightTable
    W: int = field(default=-1)

    def __post_init__(self):
        object.__setattr__(self, "X", _ARR(self.X))
        object.__setattr__(self, "Y", _ARR(self.Y))
        if self.W < 0:
            object.__setattr__(self, "W", self.w.max_finite)

    @property
    def back_cost(self) -> int:
        return self.W + 1


def grid_inputs(w: int, h: int) -> list[tuple[int, int]]:
    """Left side bottom-to-top, then top side left-to-right."""
    return [(0, h - i) for i in range(h + 1)] + [(x, 0) for x in range(1, w + 1)]


def grid_outputs(w: int, h: int) -> list[tuple[int, int]]:
    """Bottom side left-to-right, then right side bottom-to-top."""
    return [(x, h) for x in range(w + 1)] + [(w, h - t) for t in range(1, h + 1)]


def brute_boundary_matrix(spec: AugGridSpec) -> np.ndarray:
    """Exact BM by one Dijkstra per input vertex over the augmented graph."""
    X, Y, w = spec.X, spec.Y, spec.w
    wd, ht = len(X), len(Y)
    if wd < 1 or ht < 1:
        raise ValueError("rectangle needs both strings nonempty")
    nv = (wd + 1) * (ht + 1)

    def vid(x, y):
        return x * (ht + 1) + y

    us, vs, cs = [], [], []

    def edge(u, v, c):
        us.append(u)
        vs.append(v)
        cs.append(c)
        us.append(v)
        vs.append(u)
        cs.append(spec.back_cost)

    for x in range(wd + 1):
        for y in range(ht + 1):
            if x < wd:
                edge(vid(x, y), vid(x + 1, y), w.delete(int(X[x])))
            if y < ht:
                edge(vid(x, y), vid(x, y + 1), w.insert(int(Y[y])))
            if x < wd and y < ht:
                edge(vid(x, y), vid(x + 1, y + 1), w.sub(int(X[x]), int(Y[y])))
    g = csr_matrix((np.array(cs, dtype=np.float64), (us, vs)), shape=(nv, nv))
    src = [vid(x, y) for x, y in grid_inputs(wd, ht)]
    dist = dijkstra(g, indices=src)
    out_ids = [vid(x, y) for x, y in grid_outputs(wd, ht)]
    return np.asarray(dist[:, out_ids], dtype=np.int64)


def walk_path_cost(spec: AugGridSpec, vertices: list[tuple[int, int]]) -> int:
    """Re-price a vertex walk in the augmented graph (forward and back steps)."""
    X, Y, w = spec.X, spec.Y, spec.w
    total = 0
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:]):
        dx, dy = x1 - x0, y1 - y0
        if (dx, dy) == (1, 0):
            total += w.delete(int(X[x0]))
        elif (dx, dy) == (0, 1):
            total += w.insert(int(Y[y0]))
        elif (dx, dy) == (1, 1):
            total += w.sub(int(X[x0]), int(Y[y0]))
        elif (dx, dy) in ((-1, 0), (0, -1), (-1, -1)):
            total += spec.back_cost
        else:
            raise ValueError(f"not an edge: {(x0, y0)} -> {(x1, y1)}")
    return total


# ---------------------------------------------------------------------------
# Self-edit distances


def _self_grid_dp(X: np.ndarray, start_row: np.ndarray) -> np.ndarray:
    """Unit DP over the self-alignment grid with main-diagonal edges removed.

    ``start_row`` seeds dp[x][0]; returns the full (n+1)x(n+1) table where
    the first index runs over the horizontal copy of X.
    """
    n = len(X)
    dp = np.full((n + 1, n + 1), INF_I64, dtype=np.int64)
    dp[:, 0] = start_row
    idx = np.arange(n + 1)
    acc = np.minimum.accumulate(dp[:, 0] - idx)
    dp[:, 0] = acc + idx
    for y in range(1, n + 1):
        cur = np.full(n + 1, INF_I64, dtype=np.int64)
        prev = dp[:, y - 1]
        np.minimum(cur, prev + 1, out=cur)  # insert
        if n:
            mism = (X != X[y - 1]).astype(np.int64)
            diag = np.where(prev[:-1] < INF_I64, prev[:-1] + mism, INF_I64)
            if 0 <= y - 1 < n:
                diag[y - 1] = INF_I64  # main-diagonal edge removed
            np.minimum(cur[1:], diag, out=cur[1:])
        acc = np.minimum.accumulate(cur - idx)
        dp[:, y] = acc + idx
    return dp


def brute_self_ed(X) -> int:
    """Cheapest self-alignment: no character aligned to its own position."""
    X = _ARR(X)
    n = len(X)
    if n == 0:
        return 0
    start = np.full(n + 1, INF_I64, dtype=np.int64)
    start[0] = 0
    dp = _self_grid_dp(X, start)
    return int(dp[n, n])


def brute_sed_k(X, k: int) -> int:
    """k-shifted self-edit distance per its grid definition.

    Starts anywhere in {(x, 0): x <= k}, ends anywhere in
    {(|X|, y): y >= |X| - k}, main-diagonal edges removed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    X = _ARR(X)
    n = len(X)
    if n == 0:
        return 0
    start = np.full(n + 1, INF_I64, dtype=np.int64)
    start[: min(n, k) + 1] = 0
    dp = _self_grid_dp(X, start)
    return int(dp[n, max(0, n - k) :].min())


def brute_min_batched(Xs, Y, w: WeightTable) -> int:
    """min_i ed^w(X_i, Y) by full DP per string."""
    return min(ed_full(Xi, Y, w) for Xi in Xs)
