"""Inner-loop kernels, JIT-compiled when numba is available.

Everything here works on int64 arrays.  ``INF_I64`` is a large sentinel
that survives one addition chain per fold without overflowing; callers
clamp it back to math.inf at API boundaries.
"""

from __future__ import annotations

import numpy as np

INF_I64 = np.int64(1) << 62

try:
    import numba

    njit = numba.njit(cache=True)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(fn):
        return fn


@njit
def _minplus_monge_jit(A, B):
    """Min-plus product of Monge matrices.

    Per output row, the column minima of the Monge matrix
    M[j, k] = A[i, j] + B[j, k] are found by divide and conquer over k,
    shrinking the candidate j-range through argmin monotonicity.  Leftmost
    argmins keep the scan deterministic.
    """
    p, q = A.shape
    r = B.shape[1]
    C = np.empty((p, r), dtype=np.int64)
    stack = np.empty((2 * r + 4, 4), dtype=np.int64)
    for i in range(p):
        top = 0
        stack[0, 0] = 0
        stack[0, 1] = r
        stack[0, 2] = 0
        stack[0, 3] = q
        while top >= 0:
            klo = stack[top, 0]
            khi = stack[top, 1]
            jlo = stack[top, 2]
            jhi = stack[top, 3]
            top -= 1
            if klo >= khi:
                continue
            k = (klo + khi) // 2
            best = A[i, jlo] + B[jlo, k]
            bj = jlo
            for j in range(jlo + 1, jhi):
                v = A[i, j] + B[j, k]
                if v < best:
                    best = v
                    bj = j
            C[i, k] = best
            top += 1
            stack[top, 0] = klo
            stack[top, 1] = k
            stack[top, 2] = jlo
            stack[top, 3] = bj + 1
            top += 1
            stack[top, 0] = k + 1
            stack[top, 1] = khi
            stack[top, 2] = bj
            stack[top, 3] = jhi
    return C


def _minplus_blocked(A, B):
    p, q = A.shape
    r = B.shape[1]
    C = (A[:, 0:1] + B[0:1, :]).copy()
    tmp = np.empty_like(C)
    for j in range(1, q):
        np.add(A[:, j : j + 1], B[j : j + 1, :], out=tmp)
        np.minimum(C, tmp, out=C)
    return C


def minplus_values(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """C[i,k] = min_j A[i,j] + B[j,k] for finite Monge inputs."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} x {B.shape}")
    if HAVE_NUMBA:
        return _minplus_monge_jit(np.ascontiguousarray(A), np.ascontiguousarray(B))
    return _minplus_blocked(A, B)


@njit
def _bm_direct_jit(del_costs, ins_costs, sub_costs, back):
    """Boundary matrix of one rectangle by per-source forward DP.

    ``del_costs[x]`` prices the horizontal edge consuming X[x],
    ``ins_costs[y]`` the vertical edge consuming Y[y], and
    ``sub_costs[x, y]`` the diagonal edge.  Ordered input/output pairs get
    forward-DP distances; anti-ordered pairs use the closed form built
    from one back edge per reverse step.
    """
    w = len(del_costs)
    h = len(ins_costs)
    size = w + h + 1
    bm = np.empty((size, size), dtype=np.int64)

    del_pre = np.zeros(w + 1, dtype=np.int64)
    for x in range(w):
        del_pre[x + 1] = del_pre[x] + del_costs[x]
    ins_pre = np.zeros(h + 1, dtype=np.int64)
    for y in range(h):
        ins_pre[y + 1] = ins_pre[y] + ins_costs[y]

    dp = np.empty((w + 1, h + 1), dtype=np.int64)
    for i in range(size):
        # input i -> vertex (sx, sy)
        if i <= h:
            sx = 0
            sy = h - i
        else:
            sx = i - h
            sy = 0
        for x in range(sx, w + 1):
            for y in range(sy, h + 1):
                if x == sx and y == sy:
                    dp[x, y] = 0
                    continue
                best = INF_I64
                if x > sx:
                    v = dp[x - 1, y] + del_costs[x - 1]
                    if v < best:
                        best = v
                if y > sy:
                    v = dp[x, y - 1] + ins_costs[y - 1]
                    if v < best:
                        best = v
                if x > sx and y > sy:
                    v = dp[x - 1, y - 1] + sub_costs[x - 1, y - 1]
                    if v < best:
                        best = v
                dp[x, y] = best
        for j in range(size):
            # output j -> vertex (tx, ty)
            if j <= w:
                tx = j
                ty = h
            else:
                tx = w
                ty = h - (j - w)
            if sx <= tx and sy <= ty:
                bm[i, j] = dp[tx, ty]
            elif sx > tx:
                bm[i, j] = (sx - tx) * back + (ins_pre[ty] - ins_pre[sy])
            else:
                bm[i, j] = (sy - ty) * back + (del_pre[tx] - del_pre[sx])
    return bm


def _bm_direct_py(del_costs, ins_costs, sub_costs, back):
    w = len(del_costs)
    h = len(ins_costs)
    size = w + h + 1
    bm = np.empty((size, size), dtype=np.int64)
    del_pre = np.concatenate(([0], np.cumsum(del_costs)))
    ins_pre = np.concatenate(([0], np.cumsum(ins_costs)))
    for i in range(size):
        sx, sy = (0, h - i) if i <= h else (i - h, 0)
        dp = np.full((w + 1, h + 1), INF_I64, dtype=np.int64)
        dp[sx, sy] = 0
        for x in range(sx, w + 1):
            row = dp[x]
            if x > sx:
                np.minimum(row[sy:], dp[x - 1, sy:] + del_costs[x - 1], out=row[sy:])
                np.minimum(
                    row[sy + 1 :],
                    dp[x - 1, sy:h] + sub_costs[x - 1, sy:h],
                    out=row[sy + 1 :],
                )
            acc = row[sy:] - ins_pre[sy : h + 1]
            np.minimum.accumulate(acc, out=acc)
            dp[x, sy:] = acc + ins_pre[sy : h + 1]
        for j in range(size):
            tx, ty = (j, h) if j <= w else (w, h - (j - w))
            if sx <= tx and sy <= ty:
                bm[i, j] = dp[tx, ty]
            elif sx > tx:
                bm[i, j] = (sx - tx) * back + (ins_pre[ty] - ins_pre[sy])
            else:
                bm[i, j] = (sy - ty) * back + (del_pre[tx] - del_pre[sx])
    return bm


def bm_direct(del_costs, ins_costs, sub_costs, back) -> np.ndarray:
    del_costs = np.ascontiguousarray(del_costs, dtype=np.int64)
    ins_costs = np.ascontiguousarray(ins_costs, dtype=np.int64)
    sub_costs = np.ascontiguousarray(sub_costs, dtype=np.int64)
    if HAVE_NUMBA:
        return _bm_direct_jit(del_costs, ins_costs, sub_costs, np.int64(back))
    return _bm_direct_py(del_costs, ins_costs, sub_costs, int(back))


@njit
def _banded_unit_jit(X, Y, k):
    """Banded unit-cost edit DP.  Returns the band matrix and offsets.

    Row y stores distances for x in [lo[y], lo[y]+width).  Cells outside
    the band read as INF.
    """
    n = len(X)
    m = len(Y)
    width = 2 * k + 1
    lo = np.empty(m + 1, dtype=np.int64)
    dp = np.full((m + 1, width), INF_I64, dtype=np.int64)
    for y in range(m + 1):
        lo[y] = max(0, y - k)
    for x in range(min(n, k) + 1):
        dp[0, x] = x
    for y in range(1, m + 1):
        l = lo[y]
        pl = lo[y - 1]
        hi = min(n, y + k)
        for x in range(l, hi + 1):
            best = INF_I64
            px = x - pl
            if 0 <= px < width and dp[y - 1, px] < best:
                best = dp[y - 1, px] + 1  # insert Y[y-1]
            if x > 0:
                pd = x - 1 - pl
                if 0 <= pd < width:
                    sub = dp[y - 1, pd]
                    if sub < INF_I64:
                        sub += 0 if X[x - 1] == Y[y - 1] else 1
                        if sub < best:
                            best = sub
                cd = x - 1 - l
                if cd >= 0:
                    v = dp[y, cd] + 1  # delete X[x-1]
                    if v < best:
                        best = v
            dp[y, x - l] = best
    return dp, lo


def _banded_unit_py(X, Y, k):
    n = len(X)
    m = len(Y)
    width = 2 * k + 1
    lo = np.maximum(0, np.arange(m + 1) - k)
    dp = np.full((m + 1, width), INF_I64, dtype=np.int64)
    top = min(n, k)
    dp[0, : top + 1] = np.arange(top + 1)
    for y in range(1, m + 1):
        l = int(lo[y])
        pl = int(lo[y - 1])
        hi = min(n, y + k)
        span = hi - l + 1
        prev = dp[y - 1]
        cur = np.full(width, INF_I64, dtype=np.int64)
        shift = l - pl
        avail = width - shift
        take = min(avail, span)
        if take > 0:
            cur[:take] = prev[shift : shift + take] + 1
        xs = np.arange(l, hi + 1)
        valid = xs > 0
        if valid.any():
            pxs = xs[valid] - 1 - pl
            ok = (pxs >= 0) & (pxs < width)
            sub = np.full(valid.sum(), INF_I64, dtype=np.int64)
            sub[ok] = prev[pxs[ok]]
            mism = (X[xs[valid] - 1] != Y[y - 1]).astype(np.int64)
            sub = np.where(sub >= INF_I64, INF_I64, sub + mism)
            tgt = cur[xs[valid] - l]
            cur[xs[valid] - l] = np.minimum(tgt, sub)
        # horizontal pass: prefix-min with unit increments
        idx = np.arange(span)
        acc = np.minimum.accumulate(cur[:span] - idx)
        cur[:span] = acc + idx
        dp[y] = cur
    return dp, lo


def banded_unit_dp(X: np.ndarray, Y: np.ndarray, k: int):
    X = np.ascontiguousarray(X, dtype=np.int64)
    Y = np.ascontiguousarray(Y, dtype=np.int64)
    if HAVE_NUMBA:
        return _banded_unit_jit(X, Y, np.int64(k))
    return _banded_unit_py(X, Y, int(k))


@njit
def _banded_weighted_jit(X, Y, cells, eps, k_units, den):
    """Banded weighted DP; band width follows the unit-cost deviation bound."""
    n = len(X)
    m = len(Y)
    k = k_units
    diff = n - m
    width = 2 * k + 1
    lo = np.empty(m + 1, dtype=np.int64)
    dp = np.full((m + 1, width), INF_I64, dtype=np.int64)
    for y in range(m + 1):
        a = y - k
        if y + diff - k > a:
            a = y + diff - k
        lo[y] = a if a > 0 else 0
    hi0 = min(n, k, diff + k)
    acc = 0
    for x in range(hi0 + 1):
        dp[0, x] = acc
        if x < n:
            acc += cells[X[x], eps]
    for y in range(1, m + 1):
        l = lo[y]
        pl = lo[y - 1]
        hi = min(n, y + k, y + diff + k)
        ins_c = cells[eps, Y[y - 1]]
        for x in range(l, hi + 1):
            best = INF_I64
            px = x - pl
            if 0 <= px < width:
                v = dp[y - 1, px] + ins_c
                if v < best:
                    best = v
            if x > 0:
                pd = x - 1 - pl
                if 0 <= pd < width and dp[y - 1, pd] < INF_I64:
                    v = dp[y - 1, pd] + cells[X[x - 1], Y[y - 1]]
                    if v < best:
                        best = v
                cd = x - 1 - l
                if cd >= 0:
                    v = dp[y, cd] + cells[X[x - 1], eps]
                    if v < best:
                        best = v
            dp[y, x - l] = best
    return dp, lo


@njit
def _lv_waves_jit(X, Y, k):
    """Forward pass of the k-differences wave algorithm on plain arrays."""
    n = len(X)
    m = len(Y)
    width = 2 * k + 1
    neg = -(1 << 40)
    waves = np.full((k + 1, width), neg, dtype=np.int64)
    x = 0
    while x < n and x < m and X[x] == Y[x]:
        x += 1
    waves[0, k] = x
    if n == m and x >= n:
        return waves, 0
    for c in range(1, k + 1):
        for d in range(-c if c < k else -k, (c if c < k else k) + 1):
            o = d + k
            best = neg
            if waves[c - 1, o] > neg:
                best = waves[c - 1, o] + 1
            if d - 1 >= -k and waves[c - 1, o - 1] > neg and waves[c - 1, o - 1] + 1 > best:
                best = waves[c - 1, o - 1] + 1
            if d + 1 <= k and waves[c - 1, o + 1] > neg and waves[c - 1, o + 1] > best:
                best = waves[c - 1, o + 1]
            if best <= neg:
                continue
            x = best
            if x > n:
                x = n
            if x > m + d:
                x = m + d
            if x < 0 or x < d:
                continue
            y = x - d
            while x < n and y < m and X[x] == Y[y]:
                x += 1
                y += 1
            if x > m + d:
                x = m + d
            waves[c, o] = x
        if waves[c, n - m + k] >= n:
            return waves, c
    return waves, -1


def lv_waves(X, Y, k):
    if HAVE_NUMBA:
        return _lv_waves_jit(
            np.ascontiguousarray(X, dtype=np.int64),
            np.ascontiguousarray(Y, dtype=np.int64),
            np.int64(k),
        )
    return None


def banded_weighted_dp(X, Y, cells, eps, k_units, den):
    if HAVE_NUMBA:
        return _banded_weighted_jit(
            np.ascontiguousarray(X, dtype=np.int64),
            np.ascontiguousarray(Y, dtype=np.int64),
            np.ascontiguousarray(cells, dtype=np.int64),
            np.int64(eps),
            np.int64(k_units),
            np.int64(den),
        )
    return None


@njit
def _dense_grid_jit(din_t, din_l, del_costs, ins_costs, sub_costs, back):
    """Distances from a virtual source to every grid vertex.

    ``din_t``/``din_l`` hold source distances to the top row and left
    column (already closed over boundary-to-boundary walks).  Row y is
    built from row y-1 with forward arms, an over-the-previous-row
    suffix scan for paths that cross and walk back left, and a
    sequential in-row horizontal pass.
    """
    nx = len(del_costs)
    ny = len(ins_costs)
    D = np.empty((nx + 1, ny + 1), dtype=np.int64)
    for x in range(nx + 1):
        D[x, 0] = din_t[x]
    suff = np.empty(nx + 1, dtype=np.int64)
    for y in range(1, ny + 1):
        best = D[nx, y - 1] + nx * back
        suff[nx] = best
        for x in range(nx - 1, -1, -1):
            v = D[x, y - 1] + x * back
            if v < best:
                best = v
            suff[x] = best
        c = ins_costs[y - 1]
        for x in range(nx + 1):
            b = D[x, y - 1] + c
            if x > 0:
                v = D[x - 1, y - 1] + sub_costs[x - 1, y - 1]
                if v < b:
                    b = v
                v = D[x - 1, y] + del_costs[x - 1]
                if v < b:
                    b = v
            else:
                if din_l[y] < b:
                    b = din_l[y]
            v = suff[x] - x * back + c
            if v < b:
                b = v
            D[x, y] = b
    return D


def _dense_grid_py(din_t, din_l, del_costs, ins_costs, sub_costs, back):
    nx = len(del_costs)
    ny = len(ins_costs)
    D = np.empty((nx + 1, ny + 1), dtype=np.int64)
    D[:, 0] = din_t
    xs = np.arange(nx + 1, dtype=np.int64)
    del_pre = np.concatenate(([0], np.cumsum(del_costs)))
    for y in range(1, ny + 1):
        prev = D[:, y - 1]
        rev = (prev + xs * back)[::-1]
        suff = np.minimum.accumulate(rev)[::-1]
        c = int(ins_costs[y - 1])
        cur = prev + c
        if nx:
            np.minimum(cur[1:], prev[:-1] + sub_costs[:, y - 1], out=cur[1:])
        cur[0] = min(cur[0], int(din_l[y]))
        np.minimum(cur, suff - xs * back + c, out=cur)
        acc = np.minimum.accumulate(cur - del_pre)
        D[:, y] = acc + del_pre
    return D


def dense_grid(din_t, din_l, del_costs, ins_costs, sub_costs, back) -> np.ndarray:
    args = (
        np.ascontiguousarray(din_t, dtype=np.int64),
        np.ascontiguousarray(din_l, dtype=np.int64),
        np.ascontiguousarray(del_costs, dtype=np.int64),
        np.ascontiguousarray(ins_costs, dtype=np.int64),
        np.ascontiguousarray(sub_costs, dtype=np.int64),
        np.int64(back),
    )
    if HAVE_NUMBA:
        return _dense_grid_jit(*args)
    return _dense_grid_py(*args)
