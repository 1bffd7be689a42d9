"""String primitives over a fingerprinted rope, and the Landau-Vishkin family.

The rope is a persistent height-balanced tree whose nodes carry forward
and reverse polynomial fingerprints under two ~2^61 moduli with random
bases, so fragment equality (and hence LCP via binary search) is a
one-sided Monte Carlo test with error probability well under 2^-40 per
comparison.  On top of the LCP primitive sit the classic wave algorithms:
bounded unweighted edit distance, self-edit distance (no character aligned
to its own position), and the shift-tolerant variant with free leading
deletions and trailing insertions.
"""

from __future__ import annotations

import random

import numpy as np

from ._kernels import lv_waves
from .core import INS, SUB, Edit, Symbols, symbols

_P1 = (1 << 61) - 1
_P2 = (1 << 62) - 57


class Fingerprinter:
    """Shared hashing context: moduli, random bases, and power caches."""

    def __init__(self, seed: int | None = None):
        rng = random.Random(seed)
        self.b1 = rng.randrange(1 << 20, _P1 - 1)
        self.b2 = rng.randrange(1 << 20, _P2 - 1)
        self._pow1: dict[int, int] = {0: 1}
        self._pow2: dict[int, int] = {0: 1}

    def pow1(self, n: int) -> int:
        got = self._pow1.get(n)
        if got is None:
            got = self._pow1[n] = pow(self.b1, n, _P1)
        return got

    def pow2(self, n: int) -> int:
        got = self._pow2.get(n)
        if got is None:
            got = self._pow2[n] = pow(self.b2, n, _P2)
        return got

    def join(self, left, right):
        """Combine (h1, h2, len) digests of adjacent fragments."""
        h1l, h2l, nl = left
        h1r, h2r, nr = right
        return (
            (h1l * self.pow1(nr) + h1r) % _P1,
            (h2l * self.pow2(nr) + h2r) % _P2,
            nl + nr,
        )


_DEFAULT_FP = Fingerprinter()


class _RNode:
    __slots__ = ("left", "right", "size", "height", "h1", "h2", "r1", "r2", "sym")

    def __init__(self, sym=None, left=None, right=None, fp=None):
        if sym is not None:
            self.left = self.right = None
            self.size = 1
            self.height = 1
            self.sym = sym
            self.h1 = self.r1 = sym % _P1
            self.h2 = self.r2 = sym % _P2
        else:
            self.left = left
            self.right = right
            self.sym = None
            self.size = left.size + right.size
            self.height = 1 + max(left.height, right.height)
            self.h1 = (left.h1 * fp.pow1(right.size) + right.h1) % _P1
            self.h2 = (left.h2 * fp.pow2(right.size) + right.h2) % _P2
            self.r1 = (right.r1 * fp.pow1(left.size) + left.r1) % _P1
            self.r2 = (right.r2 * fp.pow2(left.size) + left.r2) % _P2


def _rjoin(l, r, fp):
    if abs(l.height - r.height) <= 1:
        return _RNode(left=l, right=r, fp=fp)
    if l.height > r.height:
        nl, nr = l.left, _rjoin(l.right, r, fp)
        if nr.height <= nl.height + 1:
            return _RNode(left=nl, right=nr, fp=fp)
        if nr.left.height > nr.right.height:
            return _RNode(
                left=_RNode(left=nl, right=nr.left.left, fp=fp),
                right=_RNode(left=nr.left.right, right=nr.right, fp=fp),
                fp=fp,
            )
        return _RNode(left=_RNode(left=nl, right=nr.left, fp=fp), right=nr.right, fp=fp)
    nl, nr = _rjoin(l, r.left, fp), r.right
    if nl.height <= nr.height + 1:
        return _RNode(left=nl, right=nr, fp=fp)
    if nl.right.height > nl.left.height:
        return _RNode(
            left=_RNode(left=nl.left, right=nl.right.left, fp=fp),
            right=_RNode(left=nl.right.right, right=nr, fp=fp),
            fp=fp,
        )
    return _RNode(left=nl.left, right=_RNode(left=nl.right, right=nr, fp=fp), fp=fp)


def _rbuild(arr, lo, hi, fp):
    if hi - lo == 1:
        return _RNode(sym=int(arr[lo]))
    mid = (lo + hi) // 2
    return _RNode(left=_rbuild(arr, lo, mid, fp), right=_rbuild(arr, mid, hi, fp), fp=fp)


def _rsplit(node, i, fp):
    """(tree over [0,i), tree over [i,size)); either side may be None."""
    if i <= 0:
        return None, node
    if i >= node.size:
        return node, None
    ls = node.left.size
    if i == ls:
        return node.left, node.right
    if i < ls:
        a, b = _rsplit(node.left, i, fp)
        return a, (_rjoin(b, node.right, fp) if b is not None else node.right)
    a, b = _rsplit(node.right, i - ls, fp)
    return (_rjoin(node.left, a, fp) if a is not None else node.left), b


class FRope:
    """Persistent fingerprinted string; edits return new versions."""

    __slots__ = ("root", "fp")

    def __init__(self, root, fp: Fingerprinter):
        self.root = root
        self.fp = fp

    @classmethod
    def from_symbols(cls, seq, fp: Fingerprinter | None = None) -> "FRope":
        fp = fp or _DEFAULT_FP
        arr = seq if isinstance(seq, np.ndarray) else symbols(seq)
        root = _rbuild(arr, 0, len(arr), fp) if len(arr) else None
        return cls(root, fp)

    def __len__(self) -> int:
        return self.root.size if self.root is not None else 0

    def access(self, i: int) -> int:
        if not 0 <= i < len(self):
            raise IndexError(f"index {i} out of range")
        node = self.root
        while node.sym is None:
            if i < node.left.size:
                node = node.left
            else:
                i -= node.left.size
                node = node.right
        return node.sym

    def digest(self, lo: int, hi: int):
        """(h1, h2, len) of positions [lo, hi); O(log) canonical pieces."""
        if not 0 <= lo <= hi <= len(self):
            raise IndexError(f"range [{lo},{hi}) out of bounds")
        if lo == hi:
            return (0, 0, 0)
        fp = self.fp
        acc = None

        def walk(node, l, r):
            nonlocal acc
            if l <= 0 and r >= node.size:
                piece = (node.h1, node.h2, node.size)
                acc = piece if acc is None else fp.join(acc, piece)
                return
            ls = node.left.size
            if l < ls:
                walk(node.left, l, min(r, ls))
            if r > ls:
                walk(node.right, max(l - ls, 0), r - ls)

        walk(self.root, lo, hi)
        return acc

    def rdigest(self, lo: int, hi: int):
        """Digest of the reversed fragment; symmetric to :meth:`digest`."""
        if not 0 <= lo <= hi <= len(self):
            raise IndexError(f"range [{lo},{hi}) out of bounds")
        if lo == hi:
            return (0, 0, 0)
        fp = self.fp
        acc = None

        def walk(node, l, r):
            nonlocal acc
            if l <= 0 and r >= node.size:
                piece = (node.r1, node.r2, node.size)
                acc = piece if acc is None else fp.join(piece, acc)
                return
            ls = node.left.size
            if l < ls:
                walk(node.left, l, min(r, ls))
            if r > ls:
                walk(node.right, max(l - ls, 0), r - ls)

        walk(self.root, lo, hi)
        return acc

    def edit(self, e: Edit) -> "FRope":
        n = len(self)
        fp = self.fp
        if e.kind == INS:
            if not 0 <= e.pos <= n:
                raise IndexError(f"insert position {e.pos} out of [0,{n}]")
            a, b = (None, None) if self.root is None else _rsplit(self.root, e.pos, fp)
            mid = _RNode(sym=int(e.sym))
            root = mid if a is None else _rjoin(a, mid, fp)
            root = root if b is None else _rjoin(root, b, fp)
            return FRope(root, fp)
        if not 0 <= e.pos < n:
            raise IndexError(f"edit position {e.pos} out of [0,{n})")
        a, rest = _rsplit(self.root, e.pos, fp)
        _, b = _rsplit(rest, 1, fp)
        if e.kind == SUB:
            mid = _RNode(sym=int(e.sym))
            root = mid if a is None else _rjoin(a, mid, fp)
            root = root if b is None else _rjoin(root, b, fp)
        else:
            if a is None:
                root = b
            elif b is None:
                root = a
            else:
                root = _rjoin(a, b, fp)
        return FRope(root, fp)

    def to_array(self) -> Symbols:
        out = np.empty(len(self), dtype=np.int64)

        def walk(node, base):
            if node is None:
                return
            if node.sym is not None:
                out[base] = node.sym
                return
            walk(node.left, base)
            walk(node.right, base + node.left.size)

        walk(self.root, 0)
        return symbols(out)

    def fragment(self, lo: int = 0, hi: int | None = None) -> "Fragment":
        return Fragment(self, lo, len(self) if hi is None else hi)


class Fragment:
    """View into an FRope; the elementary object of the string primitives."""

    __slots__ = ("rope", "lo", "hi")

    def __init__(self, rope: FRope, lo: int, hi: int):
        if not 0 <= lo <= hi <= len(rope):
            raise IndexError(f"fragment [{lo},{hi}) out of bounds")
        self.rope = rope
        self.lo = lo
        self.hi = hi

    def __len__(self) -> int:
        return self.hi - self.lo

    def access(self, i: int) -> int:
        if not 0 <= i < len(self):
            raise IndexError(f"index {i} out of fragment range")
        return self.rope.access(self.lo + i)

    def extract(self, l: int, r: int) -> "Fragment":
        if not 0 <= l <= r <= len(self):
            raise IndexError(f"sub-range [{l},{r}) out of fragment range")
        return Fragment(self.rope, self.lo + l, self.lo + r)

    def digest(self, l: int, r: int):
        return self.rope.digest(self.lo + l, self.lo + r)

    def rdigest(self, l: int, r: int):
        return self.rope.rdigest(self.lo + l, self.lo + r)


def access(S: Fragment, i: int) -> int:
    return S.access(i)


def length(S: Fragment) -> int:
    return len(S)


def extract(S: Fragment, l: int, r: int) -> Fragment:
    return S.extract(l, r)


def lcp(S: Fragment, T: Fragment) -> int:
    """Length of the longest common prefix, by fingerprint binary search."""
    limit = min(len(S), len(T))
    lo, hi = 0, limit  # invariant: prefix of length lo matches
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if S.digest(0, mid) == T.digest(0, mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def lcp_reverse(S: Fragment, T: Fragment) -> int:
    """Length of the longest common suffix."""
    limit = min(len(S), len(T))
    lo, hi = 0, limit
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if S.rdigest(len(S) - mid, len(S)) == T.rdigest(len(T) - mid, len(T)):
            lo = mid
        else:
            hi = mid - 1
    return lo


# ---------------------------------------------------------------------------
# LCP providers for the wave algorithms


class DirectPair:
    """Plain-array provider; suffix LCPs by vectorized scan."""

    def __init__(self, X, Y):
        self.X = X if isinstance(X, np.ndarray) else symbols(X)
        self.Y = Y if isinstance(Y, np.ndarray) else symbols(Y)
        self.n = len(self.X)
        self.m = len(self.Y)

    def lcp(self, i: int, j: int) -> int:
        limit = min(self.n - i, self.m - j)
        if limit <= 0:
            return 0
        a = self.X[i : i + limit]
        b = self.Y[j : j + limit]
        neq = a != b
        return int(np.argmax(neq)) if neq.any() else limit


class FragmentPair:
    """Fingerprint provider over rope fragments."""

    def __init__(self, X: Fragment, Y: Fragment):
        self.X = X
        self.Y = Y
        self.n = len(X)
        self.m = len(Y)

    def lcp(self, i: int, j: int) -> int:
        return lcp(self.X.extract(i, self.n), self.Y.extract(j, self.m))


def _as_pair(X, Y):
    if isinstance(X, Fragment) and isinstance(Y, Fragment):
        return FragmentPair(X, Y)
    if isinstance(X, FRope):
        X = X.fragment()
    if isinstance(Y, FRope):
        Y = Y.fragment()
    if isinstance(X, Fragment) and isinstance(Y, Fragment):
        return FragmentPair(X, Y)
    return DirectPair(X, Y)


# ---------------------------------------------------------------------------
# Wave engines

_NEG = -(1 << 40)


def lv_ed(X, Y, k: int):
    """(ed(X, Y), optimal unweighted alignment) if ed <= k, else None."""
    pair = _as_pair(X, Y)
    n, m = pair.n, pair.m
    if abs(n - m) > k:
        return None
    if isinstance(pair, DirectPair):
        fast = lv_waves(pair.X, pair.Y, k)
        if fast is not None:
            wave_mat, cost = fast
            if cost < 0:
                return None
            if cost == 0:
                return 0, ([(0, 0), (n, m)] if n else [(0, 0)])
            rows = [wave_mat[c] for c in range(cost + 1)]
            return cost, _lv_backtrack(pair, rows, cost, n, m, k)
    width = 2 * k + 1

    def clamp(x, d):
        return min(x, n, m + d)

    waves = []
    first = np.full(width, _NEG, dtype=np.int64)
    first[k] = pair.lcp(0, 0) if n and m else 0
    waves.append(first)
    if n == m and first[k] >= n:
        return 0, ([(0, 0), (n, m)] if n else [(0, 0)])
    for c in range(1, k + 1):
        prev = waves[-1]
        cur = np.full(width, _NEG, dtype=np.int64)
        for d in range(-min(c, k), min(c, k) + 1):
            o = d + k
            best = _NEG
            if prev[o] > _NEG:
                best = prev[o] + 1  # substitution
            if d - 1 >= -k and prev[o - 1] > _NEG:
                best = max(best, prev[o - 1] + 1)  # deletion
            if d + 1 <= k and prev[o + 1] > _NEG:
                best = max(best, prev[o + 1])  # insertion
            if best <= _NEG:
                continue
            x = clamp(best, d)
            if x < max(0, d):
                continue
            x += pair.lcp(x, x - d)
            cur[o] = clamp(x, d)
        waves.append(cur)
        if cur[n - m + k] >= n:
            return c, _lv_backtrack(pair, waves, c, n, m, k)
    return None


def _lv_backtrack(pair, waves, cost, n, m, k):
    bps = [(n, m)]
    d = n - m
    x = n
    for c in range(cost, 0, -1):
        prev = waves[c - 1]
        o = d + k

        def try_arm(pd, step):
            if not -k <= pd <= k or prev[pd + k] <= _NEG:
                return None
            arrive = prev[pd + k] + step
            arrive = min(arrive, n, m + d)
            if arrive < max(0, d) or arrive > x:
                return None
            run = pair.lcp(arrive, arrive - d)
            if min(arrive + run, n, m + d) == x:
                return arrive
            return None

        hit = try_arm(d, 1)  # substitution first
        if hit is not None:
            px, pd = prev[d + k], d
        else:
            hit = try_arm(d - 1, 1)  # then deletion
            if hit is not None:
                px, pd = prev[d - 1 + k], d - 1
            else:
                hit = try_arm(d + 1, 0)  # then insertion
                assert hit is not None, "wave backtrack lost the path"
                px, pd = prev[d + 1 + k], d + 1
        bps.append((int(px), int(px - pd)))
        x, d = int(px), int(pd)
    if bps[-1] != (0, 0):
        bps.append((0, 0))
    bps.reverse()
    return bps


def self_ed(X, k: int):
    """(self-edit distance, self-alignment) if <= k, else None."""
    if k < 1:
        raise ValueError("k must be >= 1")
    pair = _as_pair(X, X)
    n = pair.n
    if n == 0:
        return 0, [(0, 0)]
    width = 2 * k + 1
    waves = [np.full(width, _NEG, dtype=np.int64)]
    waves[0][k] = 0  # no extension on the forbidden diagonal
    for c in range(1, k + 1):
        prev = waves[-1]
        cur = np.full(width, _NEG, dtype=np.int64)
        for d in range(-min(c, k), min(c, k) + 1):
            o = d + k
            best = _NEG
            if d != 0 and prev[o] > _NEG:
                best = prev[o] + 1
            if d - 1 >= -k and prev[o - 1] > _NEG:
                best = max(best, prev[o - 1] + 1)
            if d + 1 <= k and prev[o + 1] > _NEG:
                best = max(best, prev[o + 1])
            if best <= _NEG:
                continue
            x = min(best, n, n + d)
            if x < max(0, d):
                continue
            if d != 0:
                x += pair.lcp(x, x - d)
            cur[o] = min(x, n, n + d)
        waves.append(cur)
        if cur[k] >= n:
            return c, _self_backtrack(pair, waves, c, n, k)
    return None


def _self_backtrack(pair, waves, cost, n, k):
    bps = [(n, n)]
    d, x = 0, n
    for c in range(cost, 0, -1):
        prev = waves[c - 1]

        def try_arm(pd, step):
            if not -k <= pd <= k or prev[pd + k] <= _NEG:
                return None
            arrive = min(prev[pd + k] + step, n, n + d)
            if arrive < max(0, d) or arrive > x:
                return None
            run = 0 if d == 0 else pair.lcp(arrive, arrive - d)
            if min(arrive + run, n, n + d) == x:
                return arrive
            return None

        hit = try_arm(d, 1) if d != 0 else None
        if hit is not None:
            px, pd = prev[d + k], d
        else:
            hit = try_arm(d - 1, 1)
            if hit is not None:
                px, pd = prev[d - 1 + k], d - 1
            else:
                hit = try_arm(d + 1, 0)
                assert hit is not None, "self-ed backtrack lost the path"
                px, pd = prev[d + 1 + k], d + 1
        bps.append((int(px), int(px - pd)))
        x, d = int(px), int(pd)
    if bps[-1] != (0, 0):
        bps.append((0, 0))
    bps.reverse()
    return bps


def sed_k(X, k: int):
    """(shift-tolerant self-edit distance, path) if <= k, else None.

    Free deletions of up to k leading characters and free insertions of up
    to k trailing ones; the path starts at (x0, 0) with x0 <= k and ends
    at (|X|, y) with y >= |X| - k, never crossing below the main diagonal.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    pair = _as_pair(X, X)
    n = pair.n
    if n == 0:
        return 0, [(0, 0)]
    if n < k:
        return _sed_small(pair, n, k)
    width = 2 * k + 1  # diagonals d = x - y in [0, 2k]
    waves = []
    first = np.full(width, _NEG, dtype=np.int64)
    for d in range(0, min(n, k) + 1):
        x = d if d == 0 else d + pair.lcp(d, 0)
        first[d] = min(x, n)
    waves.append(first)
    hit = _sed_done(first, n, k)
    if hit is not None:
        return 0, _sed_backtrack(pair, waves, 0, hit, n, k)
    for c in range(1, k + 1):
        prev = waves[-1]
        cur = np.full(width, _NEG, dtype=np.int64)
        for d in range(0, min(2 * k, n) + 1):
            best = _NEG
            if d != 0 and prev[d] > _NEG:
                best = prev[d] + 1
            if d - 1 >= 0 and prev[d - 1] > _NEG:
                best = max(best, prev[d - 1] + 1)
            if d + 1 <= 2 * k and prev[d + 1] > _NEG:
                best = max(best, prev[d + 1])
            if best <= _NEG:
                continue
            x = min(best, n)
            if x < d:
                continue
            if d != 0:
                x += pair.lcp(x, x - d)
            cur[d] = min(x, n)
        waves.append(cur)
        hit = _sed_done(cur, n, k)
        if hit is not None:
            return c, _sed_backtrack(pair, waves, c, hit, n, k)
    return None


def _sed_done(wave, n, k):
    for d in range(0, min(k, n) + 1):
        if wave[d] >= n:
            return d
    return None


def _sed_backtrack(pair, waves, cost, d_end, n, k):
    bps = [(n, n - d_end)]
    d, x = d_end, n
    for c in range(cost, 0, -1):
        prev = waves[c - 1]

        def try_arm(pd, step):
            if not 0 <= pd <= 2 * k or prev[pd] <= _NEG:
                return None
            arrive = min(prev[pd] + step, n)
            if arrive < d or arrive > x:
                return None
            run = 0 if d == 0 else pair.lcp(arrive, arrive - d)
            if min(arrive + run, n) == x:
                return arrive
            return None

        hit = try_arm(d, 1) if d != 0 else None
        if hit is not None:
            px, pd = prev[d], d
        else:
            hit = try_arm(d - 1, 1)
            if hit is not None:
                px, pd = prev[d - 1], d - 1
            else:
                hit = try_arm(d + 1, 0)
                assert hit is not None, "sed backtrack lost the path"
                px, pd = prev[d + 1], d + 1
        bps.append((int(px), int(px - pd)))
        x, d = int(px), int(pd)
    # initial wave: walked along diagonal d from its free start (d, 0)
    if bps[-1] != (d, 0):
        bps.append((d, 0))
    bps.reverse()
    return bps


def _sed_small(pair, n, k):
    """Dense DP branch for |X| < k, with parent tracking for the path."""
    X = pair.X if isinstance(pair, DirectPair) else None
    if X is None:
        X = np.array([pair.X.access(i) for i in range(n)], dtype=np.int64)
    big = 1 << 40
    dist = np.full((n + 1, n + 1), big, dtype=np.int64)
    for x in range(0, min(n, k) + 1):
        dist[x, 0] = 0
    for y in range(0, n + 1):
        for x in range(0, n + 1):
            d = dist[x, y]
            if x > 0:
                d = min(d, dist[x - 1, y] + 1)
            if y > 0:
                d = min(d, dist[x, y - 1] + 1)
            if x > 0 and y > 0 and x != y:
                d = min(d, dist[x - 1, y - 1] + (0 if X[x - 1] == X[y - 1] else 1))
            dist[x, y] = d
    ys = range(max(0, n - k), n + 1)
    best_y = min(ys, key=lambda y: dist[n, y])
    val = int(dist[n, best_y])
    if val > k:
        return None
    pairs = [(n, best_y)]
    x, y = n, best_y
    while not (y == 0 and dist[x, y] == 0 and x <= min(n, k)):
        here = dist[x, y]
        if x > 0 and y > 0 and x != y and dist[x - 1, y - 1] + (0 if X[x - 1] == X[y - 1] else 1) == here:
            if X[x - 1] != X[y - 1]:
                pairs.append((x - 1, y - 1))
            x, y = x - 1, y - 1
        elif x > 0 and dist[x - 1, y] + 1 == here:
            pairs.append((x - 1, y))
            x -= 1
        else:
            pairs.append((x, y - 1))
            y -= 1
    if pairs[-1] != (x, y):
        pairs.append((x, y))
    pairs.reverse()
    return val, pairs
