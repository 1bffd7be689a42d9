"""Dynamic bounded weighted edit distance over a string X under edits.

X is cut into phrases of length in [k, 2k).  Each phrase X_i gets a box
oracle over the padded window Y_i = X[x_i - 2k, x_{i+1} + 2k), whose
rectangles tile the width-2k band of the X-vs-X alignment graph, and the
separator-to-separator distance matrices D_{i,i+1} live in a persistent
range-composition tree.  A query receives Z as an edit script on X; the
band of X-vs-Z differs from the stored band only inside the O(u) affected
boxes, so the chain product folds stored matrices over unaffected runs and
re-derives affected boxes through their oracles.  A character edit to X
rebuilds the five surrounding phrases and splices the composition tree.

Coordinates inside stored matrices and oracles are box-local; the global
row offsets induced by length-changing script edits are applied only at
query time through a position map, so unaffected boxes keep their stored
structures verbatim.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from ._kernels import INF_I64
from .box_oracle import BoxOracle
from .core import (
    DEL,
    INF,
    INS,
    SUB,
    Edit,
    EditScript,
    WeightTable,
    compress_breakpoints,
    identity_breakpoints,
    symbols,
)
from .monge import INF_CUT, Z, vec_minplus
from .range_tree import RangeTree, rt_build, rt_concat, rt_cover_nodes, rt_split

DYN_MIN_LEVEL = 3
DYN_LEAF_SIDE = 24


def partition_lengths(total: int, k: int) -> list[int]:
    """Greedy phrase lengths in [k, 2k): chunks of 3k/2, last two balanced."""
    if total < k:
        raise ValueError("cannot partition below one phrase length")
    out = []
    rem = total
    step = 3 * k // 2
    while rem >= 2 * k:
        take = step if rem - step >= k else k
        out.append(take)
        rem -= take
    out.append(rem)
    return out


@dataclass
class _Box:
    """Per-phrase structures; all row coordinates are window-local."""

    oracle: BoxOracle
    d_mat: np.ndarray  # distances V_i -> V_{i+1}, rows/cols by decreasing y


class _PosMap:
    """Image of source grid positions on the target axis of a script."""

    def __init__(self, script: EditScript):
        self.pos = []
        self.cum = [0]
        run = 0
        for e in script.edits:
            if e.kind == INS:
                d = 1
            elif e.kind == DEL:
                d = -1
            else:
                d = 0
            self.pos.append(e.pos)
            run += d
            self.cum.append(run)

    def __call__(self, p: int) -> int:
        return p + self.cum[bisect_left(self.pos, p)]


def _slice_script(script: EditScript, lo: int, hi: int, include_end_inserts: bool) -> EditScript:
    picked = []
    for e in script.edits:
        if lo <= e.pos < hi or (include_end_inserts and e.kind == INS and e.pos == hi):
            picked.append(Edit(e.kind, e.pos - lo, e.sym))
    return EditScript(picked)


class DynWed:
    """One threshold-k instance of the dynamic structure."""

    def __init__(self, X, k: int, w: WeightTable):
        if k < 1:
            raise ValueError("threshold must be >= 1")
        w.require_valid()
        self.k = k
        self.den = w.den
        self.w = w.cap(k)
        self.W = self.w.max_finite
        self.cap = 4 * k + 1
        self.X: list[int] = [int(v) for v in X]
        self.cuts: list[int] = []
        self.boxes: list[_Box] = []
        self.rtree: RangeTree | None = None
        self.fallback_oracle: BoxOracle | None = None
        self._rebuild_all()

    # -- layout helpers ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.X)

    @property
    def fallback(self) -> bool:
        return self.n <= self.k

    def _window(self, i: int) -> tuple[int, int]:
        k2 = 2 * self.k
        return max(self.cuts[i] - k2, 0), min(self.cuts[i + 1] + k2, self.n)

    def _vrange(self, i: int) -> tuple[int, int]:
        """Row range of separator V_i; V_0 and V_m are singletons."""
        m = len(self.cuts) - 1
        if i == 0:
            return 0, 0
        if i == m:
            return self.n, self.n
        k2 = 2 * self.k
        return max(self.cuts[i] - k2, 0), min(self.cuts[i] + k2, self.n)

    # -- construction and updates --------------------------------------------

    def _make_box(self, i: int) -> _Box:
        x0, x1 = self.cuts[i], self.cuts[i + 1]
        wy0, wy1 = self._window(i)
        oracle = BoxOracle(
            symbols(self.X[x0:x1]),
            symbols(self.X[wy0:wy1]),
            self.w,
            self.W,
            min_level=DYN_MIN_LEVEL,
            leaf_side=DYN_LEAF_SIDE,
            lazy=True,
        )
        tree = oracle.full_tree
        vin_lo, vin_hi = self._vrange(i)
        vout_lo, vout_hi = self._vrange(i + 1)
        rows = slice(wy1 - vin_hi, wy1 - vin_lo + 1)
        cols = slice((x1 - x0) + (wy1 - vout_hi), (x1 - x0) + (wy1 - vout_lo) + 1)
        return _Box(oracle, tree.submatrix(rows, cols))

    def _rebuild_all(self) -> None:
        if self.fallback:
            self.cuts = []
            self.boxes = []
            self.rtree = None
            self.fallback_oracle = (
                BoxOracle(
                    symbols(self.X),
                    symbols(self.X),
                    self.w,
                    self.W,
                    min_level=DYN_MIN_LEVEL,
                    leaf_side=DYN_LEAF_SIDE,
                    lazy=True,
                )
                if self.n
                else None
            )
            return
        self.fallback_oracle = None
        lengths = partition_lengths(self.n, self.k)
        self.cuts = [0]
        for L in lengths:
            self.cuts.append(self.cuts[-1] + L)
        self.boxes = [self._make_box(i) for i in range(len(self.cuts) - 1)]
        self.rtree = rt_build([b.d_mat for b in self.boxes], self.cap)

    def edit(self, e: Edit) -> None:
        """Apply one character edit to X and restore all invariants."""
        n = self.n
        hi = n if e.kind == INS else n - 1
        if not 0 <= e.pos <= hi:
            raise IndexError(f"{e.kind} at {e.pos} out of range for length {n}")
        if self.fallback or len(self.cuts) - 1 <= 5:
            self._apply_to_x(e)
            self._rebuild_all()
            return
        m = len(self.cuts) - 1
        i = min(bisect_right(self.cuts, e.pos) - 1, m - 1)
        a, b = max(i - 2, 0), min(i + 3, m)
        if b - a >= m:
            self._apply_to_x(e)
            self._rebuild_all()
            return
        self._apply_to_x(e)
        delta = {INS: 1, DEL: -1, SUB: 0}[e.kind]
        seg_lo = self.cuts[a]
        seg_hi = self.cuts[b] + delta
        lengths = partition_lengths(seg_hi - seg_lo, self.k)
        new_cuts = []
        acc = seg_lo
        for L in lengths[:-1]:
            acc += L
            new_cuts.append(acc)
        self.cuts = self.cuts[: a + 1] + new_cuts + [c + delta for c in self.cuts[b:]]
        fresh = [self._make_box(j) for j in range(a, a + len(lengths))]
        self.boxes[a:b] = fresh
        # splice the range tree: [0, a) + fresh + [b, m)
        t = self.rtree
        left = right = None
        if a > 0:
            left, t = rt_split(t, a)
        if b < m:
            t, right = rt_split(t, b - a)
        mid = rt_build([bx.d_mat for bx in fresh], self.cap)
        t = mid if left is None else rt_concat(left, mid)
        self.rtree = t if right is None else rt_concat(t, right)

    def _apply_to_x(self, e: Edit) -> None:
        if e.kind == INS:
            self.X.insert(e.pos, int(e.sym))
        elif e.kind == DEL:
            del self.X[e.pos]
        else:
            self.X[e.pos] = int(e.sym)

    # -- queries ---------------------------------------------------------------

    def query(self, script: EditScript, *, want_alignment: bool = True):
        """ed^w_{<=k}(X, Z) for Z given as an edit script on X.

        Returns (value numerator, breakpoints) or (inf, None).
        """
        x_arr = symbols(self.X)
        script.check_canonical(x_arr)
        u = len(script)
        if u > self.k:
            raise ValueError(f"script length {u} exceeds threshold {self.k}")
        if u == 0:
            return 0, identity_breakpoints(self.n)
        if self.fallback:
            return self._query_fallback(script, x_arr, want_alignment)
        pmap = _PosMap(script)
        m = len(self.cuts) - 1
        nz = script.target_len(self.n)
        affected = self._affected_boxes(script, m)
        budget = self.k * self.den

        v = np.zeros(1, dtype=np.int64)
        steps = []  # (kind, payload, v_before) for backtracking
        idx = 0
        for box_i in affected:
            if box_i > idx:
                v, run_steps = self._fold_run(idx, box_i, v)
                steps.extend(run_steps)
            v, st = self._fold_affected(box_i, v, script, pmap, nz)
            steps.append(st)
            idx = box_i + 1
        if idx < m:
            v, run_steps = self._fold_run(idx, m, v)
            steps.extend(run_steps)
        ans = int(v[0])
        if ans > budget:
            return INF, None
        if not want_alignment:
            return ans, None
        z_arr = script.apply(x_arr)
        pairs = self._backtrack(steps, ans, z_arr, pmap)
        return ans, compress_breakpoints(x_arr, z_arr, pairs)

    def _affected_boxes(self, script: EditScript, m: int) -> list[int]:
        got = set()
        for e in script.edits:
            p = e.pos
            # boxes whose window [x_i - 2k, x_{i+1} + 2k) contains p
            lo = bisect_left(self.cuts, p - 2 * self.k + 1, 1, m) - 2
            hi = bisect_right(self.cuts, p + 2 * self.k, 1, m) + 1
            for i in range(max(lo, 0), min(hi, m)):
                wy0, wy1 = self._window(i)
                if wy0 <= p < wy1 or (i == m - 1 and e.kind == INS and p == wy1):
                    got.add(i)
        return sorted(got)

    def _fold_run(self, lo: int, hi: int, v: np.ndarray):
        nodes = rt_cover_nodes(self.rtree, lo, hi)
        steps = []
        abs_i = lo
        for node in nodes:
            assert node.product is not Z, "valid chains never hit the dimension cap"
            steps.append(("run", abs_i, node, v))
            v, _ = vec_minplus(v, node.product)
            abs_i += node.size
        return v, steps

    def _box_query_geometry(self, i: int, pmap, nz: int):
        m = len(self.cuts) - 1
        wy0, wy1 = self._window(i)
        wlo = pmap(wy0) if i > 0 else 0
        whi = pmap(wy1) if i < m - 1 else nz
        vin_lo, vin_hi = self._vrange(i)
        vout_lo, vout_hi = self._vrange(i + 1)
        pin = (pmap(vin_lo), pmap(vin_hi)) if i > 0 else (0, 0)
        pout = (pmap(vout_lo), pmap(vout_hi)) if i + 1 < m else (nz, nz)
        return wy0, wy1, wlo, whi, pin, pout

    def _fold_affected(self, i: int, v: np.ndarray, script: EditScript, pmap, nz: int):
        m = len(self.cuts) - 1
        wy0, wy1, wlo, whi, (pin_lo, pin_hi), (pout_lo, pout_hi) = self._box_query_geometry(
            i, pmap, nz
        )
        local = _slice_script(script, wy0, wy1, include_end_inserts=(i == m - 1))
        nx = self.cuts[i + 1] - self.cuts[i]
        ny = whi - wlo
        assert pin_hi - pin_lo + 1 == len(v), "separator width mismatch"
        vec = np.full(nx + ny + 1, INF_I64, dtype=np.int64)
        vec[whi - pin_hi : whi - pin_lo + 1] = v
        out = self.boxes[i].oracle.propagate_dense(local, vec)
        sl = slice(nx + (whi - pout_hi), nx + (whi - pout_lo) + 1)
        step = ("box", i, local, vec, sl, wlo, whi)
        return out[sl].copy(), step

    # -- fallback (|X| <= k) ----------------------------------------------------

    def _query_fallback(self, script: EditScript, x_arr, want_alignment: bool):
        nz = script.target_len(self.n)
        budget = self.k * self.den
        if self.n == 0:
            z = script.apply(x_arr)
            val = int(self.w.cells[self.w.eps, z].sum()) if nz else 0
            if val > budget:
                return INF, None
            return val, [(0, y) for y in range(nz + 1)] if nz else [(0, 0)]
        v = np.full(self.n + nz + 1, INF_I64, dtype=np.int64)
        v[nz] = 0  # the (0, 0) corner
        out = self.fallback_oracle.propagate_dense(script, v)
        val = int(out[self.n])
        if val > budget:
            return INF, None
        if not want_alignment:
            return val, None
        entry, path = self.fallback_oracle.backtrack(script, v, self.n)
        assert entry == nz
        z_arr = script.apply(x_arr)
        return val, compress_breakpoints(x_arr, z_arr, path)

    # -- alignment backtracking --------------------------------------------------

    def _backtrack(self, steps, ans: int, z_arr, pmap) -> list[tuple[int, int]]:
        m = len(self.cuts) - 1
        target_idx = 0  # position inside the current separator vector
        target_val = ans
        fragments: list[list[tuple[int, int]]] = []
        for st in reversed(steps):
            if st[0] == "box":
                _, i, local, vec, sl, wlo, whi = st
                out_index = sl.start + target_idx
                entry, path = self.boxes[i].oracle.backtrack(local, vec, out_index)
                x0 = self.cuts[i]
                fragments.append([(x0 + lx, wlo + ly) for lx, ly in path])
                target_idx = entry - (whi - pmap(self._vrange(i)[1]) if i > 0 else whi)
                if i == 0:
                    target_idx = 0
                target_val = int(vec[entry])
            else:
                _, abs_i, node, v_in = st
                pairs, src_idx, src_val = self._descend(node, v_in, target_idx, target_val)
                for off, (s, t) in sorted(pairs.items(), reverse=True):
                    fragments.append(self._run_box_path(abs_i + off, s, t, pmap))
                target_idx, target_val = src_idx, src_val
        fragments.reverse()
        out = []
        for frag in fragments:
            if out and frag and out[-1] == frag[0]:
                frag = frag[1:]
            out.extend(frag)
        return out

    def _descend(self, node, v_in, t_idx: int, val: int):
        """Per-box (source, target) witnesses inside one cover node."""
        if node.is_leaf:
            col = node.product[:, t_idx]
            cands = v_in + col
            s = int(np.flatnonzero((v_in < INF_CUT) & (cands == val))[0])
            return {0: (s, t_idx)}, s, int(v_in[s])
        v_mid, _ = vec_minplus(v_in, node.left.product)
        right_pairs, s_mid, mid_val = self._descend(node.right, v_mid, t_idx, val)
        left_pairs, s_src, src_val = self._descend(node.left, v_in, s_mid, mid_val)
        merged = dict(left_pairs)
        for off, pr in right_pairs.items():
            merged[off + node.left.size] = pr
        return merged, s_src, src_val

    def _run_box_path(self, i: int, s: int, t: int, pmap) -> list[tuple[int, int]]:
        wy0, wy1 = self._window(i)
        vin_lo, vin_hi = self._vrange(i)
        vout_lo, vout_hi = self._vrange(i + 1)
        nx = self.cuts[i + 1] - self.cuts[i]
        in_idx = wy1 - (vin_hi - s)
        out_idx = nx + wy1 - (vout_hi - t)
        tree = self.boxes[i].oracle.full_tree
        path = tree.reconstruct_path(in_idx, out_idx)
        shift = pmap(wy0) - wy0  # rigid: unaffected windows hold no edits
        x0 = self.cuts[i]
        return [(x0 + lx, wy0 + ly + shift) for lx, ly in path]

    # -- invariant helpers (used by tests) ----------------------------------------

    def check_invariants(self) -> None:
        if self.fallback:
            assert not self.boxes and self.rtree is None
            return
        assert self.cuts[0] == 0 and self.cuts[-1] == self.n
        for a, b in zip(self.cuts, self.cuts[1:]):
            assert self.k <= b - a < 2 * self.k
        assert len(self.boxes) == len(self.cuts) - 1 == len(self.rtree)
        assert self.rtree.product is not Z, "whole-chain product must stay compatible"
        for i, box in enumerate(self.boxes):
            vin_lo, vin_hi = self._vrange(i)
            vout_lo, vout_hi = self._vrange(i + 1)
            assert box.d_mat.shape == (vin_hi - vin_lo + 1, vout_hi - vout_lo + 1)
            assert max(box.d_mat.shape) <= self.cap


class DynWedMulti:
    """Threshold-doubling stack of DynWed instances sharing one string."""

    def __init__(self, X, k: int, w: WeightTable):
        if k < 1:
            raise ValueError("threshold must be >= 1")
        self.k = k
        self.den = w.den
        top = max(1, 1 << (k - 1).bit_length())
        self.thresholds = [1 << j for j in range((top).bit_length())]
        self.instances = {t: DynWed(X, t, w) for t in self.thresholds}
        self.queried: list[int] = []  # instrumentation: thresholds asked per query

    def edit(self, e: Edit) -> None:
        for inst in self.instances.values():
            inst.edit(e)

    def query(self, script: EditScript, *, want_alignment: bool = True):
        u = len(script)
        if u > self.k:
            raise ValueError(f"script length {u} exceeds threshold {self.k}")
        self.queried = []
        start = max(u, 1).bit_length() - (1 if max(u, 1) & (max(u, 1) - 1) == 0 else 0)
        budget = self.k * self.den
        for t in self.thresholds:
            if t < (1 << start):
                continue
            self.queried.append(t)
            val, bps = self.instances[t].query(script, want_alignment=want_alignment)
            if val is not INF and val <= t * self.den:
                if val > budget:
                    return INF, None
                return val, bps
        return INF, None
