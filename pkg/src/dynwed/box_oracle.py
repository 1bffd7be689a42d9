"""Preprocess (X, Y) to sweep distance vectors across X x Y' for edited Y'.

The oracle stores, per dyadic level t, one chain of square boundary trees
for every aligned fragment Y[a*2^t, (a+1)*2^t).  The fragments around a
position c with dyadic radius 2^(e_c) are exactly the level-(e_c) aligned
fragments left and right of c, so any simple fragment of Y decomposes into
O(log) exact stored pieces.  A propagate query walks the phrase
decomposition of Y' top to bottom: single characters by one DP row,
matched fragments by folding the running vector through the stored chains.
"""

from __future__ import annotations

import numpy as np

from ._kernels import INF_I64, dense_grid
from .boundary import BoundaryTree, dyadic_fragment_params, split_simple
from .core import EditScript, WeightTable, symbols
from .dp_oracle import unit_alignment
from .monge import INF_CUT, vec_minplus


class BoxOracle:
    """Chains of square boundary trees over one alignment-grid rectangle."""

    def __init__(
        self,
        X,
        Y,
        w: WeightTable,
        W: int | None = None,
        *,
        min_level: int = 0,
        leaf_side: int = 2,
        lazy: bool = False,
    ):
        self.X = symbols(X) if not isinstance(X, np.ndarray) else X
        self.Y = symbols(Y) if not isinstance(Y, np.ndarray) else Y
        if len(self.X) < 1 or len(self.Y) < 1:
            raise ValueError("both strings must be nonempty")
        self.w = w
        self.W = w.max_finite if W is None else W
        self.back = self.W + 1
        self.min_level = min_level
        self.leaf_side = leaf_side
        ny = len(self.Y)
        self.top_level = (ny - 1).bit_length() if ny > 1 else 0
        self.del_costs = w.cells[self.X, w.eps]
        self.ins_costs = w.cells[w.eps, self.Y]
        self.del_pre = np.concatenate(([0], np.cumsum(self.del_costs)))
        self._chains: dict[tuple[int, int], list[BoundaryTree]] = {}
        if not lazy:
            for t in self.stored_levels():
                for a in range(-(-ny // (1 << t))):
                    self.chain(t, a)

    # -- storage -----------------------------------------------------------

    def fragment_span(self, t: int, a: int) -> tuple[int, int]:
        lo = a << t
        return lo, min(lo + (1 << t), len(self.Y))

    def stored_levels(self) -> list[int]:
        """Dyadic levels with materialized chains; the top always exists."""
        lo = min(max(self.min_level, 0), self.top_level)
        return list(range(lo, self.top_level + 1))

    def has_level(self, t: int) -> bool:
        return self.stored_levels()[0] <= t <= self.top_level

    def chain(self, t: int, a: int) -> list[BoundaryTree]:
        """Block trees tiling X for the aligned fragment (t, a)."""
        key = (t, a)
        got = self._chains.get(key)
        if got is not None:
            return got
        lo, hi = self.fragment_span(t, a)
        if not (self.has_level(t) and lo < hi <= len(self.Y)):
            raise KeyError(f"no stored chain for level {t}, index {a}")
        side = 1 << t
        blocks = []
        for xb in range(0, len(self.X), side):
            xe = min(xb + side, len(self.X))
            blocks.append(
                BoundaryTree(
                    self.X[xb:xe], self.Y[lo:hi], self.w, self.W, leaf_side=self.leaf_side
                )
            )
        self._chains[key] = blocks
        return blocks

    def stored_chain_count(self, t: int) -> int:
        if not self.has_level(t):
            return 0
        return -(-len(self.Y) // (1 << t))

    def chain_for_position(self, c: int, side: str) -> list[BoundaryTree]:
        """The stored chain covering [l_c, c) ('left') or [c, r_c) ('right')."""
        e, lo, hi = dyadic_fragment_params(c, len(self.Y))
        if side == "right":
            if c >= hi:
                return []
            return self.chain(min(e, self.top_level), c >> min(e, self.top_level))
        if c <= lo:
            return []
        return self.chain(e, (c >> e) - 1)

    @property
    def full_tree(self) -> BoundaryTree:
        """Single tree over the whole rectangle (exists when |X| <= 2^top)."""
        blocks = self.chain(self.top_level, 0)
        if len(blocks) != 1:
            raise ValueError("rectangle too wide for a single top-level block")
        return blocks[0]

    # -- phrase machinery ---------------------------------------------------

    def phrase_decomposition(self, script: EditScript):
        """Phrases of Y' = script(Y): single chars and simple fragments of Y.

        Returns (Y', phrases) where each phrase is ('char', target_row) or
        ('frag', i, j) with Y'[rows] == Y[i:j) and [i, j) simple; at most
        3*ed(Y, Y') + 2 phrases.
        """
        script.check_canonical(self.Y)
        Yp = script.apply(self.Y)
        res = unit_alignment(self.Y, Yp, max(len(script), 1))
        assert res is not None, "script length bounds the unit distance"
        _, bps = res
        raw = []
        for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
            gx, gy = x1 - x0, y1 - y0
            ax, ay = x0, y0
            if gx == gy:
                if self.Y[x0] != Yp[y0]:
                    raw.append(("char", y0))
                    ax, ay = x0 + 1, y0 + 1
            elif gx == gy + 1:
                ax = x0 + 1
            else:
                raw.append(("char", y0))
                ay = y0 + 1
            if x1 > ax:
                raw.append(("frag", ax, x1, ay))
        phrases = []
        ny = len(self.Y)
        for ph in raw:
            if ph[0] == "char":
                phrases.append(ph[:2])
                continue
            _, i, j, _ = ph
            if j - i == 1:
                phrases.append(("char", ph[3]))
                continue
            c = split_simple(i, j, ny)
            if i < c:
                phrases.append(("frag", i, c))
            if c < j:
                phrases.append(("frag", c, j))
        return Yp, phrases

    def _dyadic_pieces(self, i: int, j: int) -> list[tuple[int, int]]:
        """Greedy aligned cover of [i, j) by stored fragments (level, index)."""
        out = []
        lo = i
        while lo < j:
            t = (lo & -lo).bit_length() - 1 if lo else self.top_level
            t = min(t, self.top_level)
            while (1 << t) > j - lo and t > 0:
                t -= 1
            out.append((t, lo >> t))
            lo += min(1 << t, j - lo)
        return out

    # -- distance propagation ------------------------------------------------

    def _boundary_closures(self, v: np.ndarray, ins_pre: np.ndarray):
        """din arrays over the edited rectangle: distances from the virtual
        source to every input vertex, closed over boundary-to-boundary walks."""
        nx = len(self.X)
        ny = len(ins_pre) - 1
        back = self.back
        v_l = v[ny::-1].astype(np.int64)  # index y in [0..ny]
        v_t = np.concatenate(([v[ny]], v[ny + 1 :])).astype(np.int64)  # index x
        ys = np.arange(ny + 1, dtype=np.int64)
        xs = np.arange(nx + 1, dtype=np.int64)
        from_above = np.minimum.accumulate(v_l - ins_pre) + ins_pre
        from_below = np.minimum.accumulate((v_l + ys * back)[::-1])[::-1] - ys * back
        top_min = (v_t[1:] + xs[1:] * back).min() if nx else INF_I64
        din_l = np.minimum.reduce([v_l, from_above, from_below, top_min + ins_pre])
        from_left = np.minimum.accumulate(v_t - self.del_pre) + self.del_pre
        from_right = np.minimum.accumulate((v_t + xs * back)[::-1])[::-1] - xs * back
        left_min = (v_l[1:] + ys[1:] * back).min() if ny else INF_I64
        din_t = np.minimum.reduce([v_t, from_left, from_right, left_min + self.del_pre])
        return din_t, din_l

    def propagate(self, script: EditScript, v) -> np.ndarray:
        """v^T (x) BM(X, Y') for Y' = script(Y), as int64 with INF_I64 holes."""
        nx = len(self.X)
        v = np.asarray(v, dtype=np.int64)
        target = script.apply(self.Y)
        if len(self.Y) * 2 < len(target):
            return self._propagate_rows(target, v)
        Yp, phrases = self.phrase_decomposition(script)
        if len(v) != nx + len(Yp) + 1:
            raise ValueError(f"vector must have {nx + len(Yp) + 1} entries")
        ny = len(Yp)
        ins_costs = self.w.cells[self.w.eps, Yp] if ny else np.zeros(0, np.int64)
        ins_pre = np.concatenate(([0], np.cumsum(ins_costs)))
        din_t, din_l = self._boundary_closures(v, ins_pre)
        R = din_t.copy()
        out_right = np.full(ny + 1, INF_I64, dtype=np.int64)
        out_right[0] = R[nx]
        q = 0
        xs = np.arange(nx + 1, dtype=np.int64)
        for ph in phrases:
            if ph[0] == "char":
                R = self._char_row(R, din_l, int(ins_costs[q]), int(Yp[q]), q + 1, xs)
                q += 1
                out_right[q] = min(out_right[q], R[nx])
            else:
                _, fi, fj = ph
                R, rights = self._fold_fragment(R, din_l, fi, fj, q)
                for d, val in enumerate(rights):
                    out_right[q + 1 + d] = min(out_right[q + 1 + d], int(val))
                q += fj - fi
                out_right[q] = min(out_right[q], R[nx])
        assert q == ny
        out = np.empty(nx + ny + 1, dtype=np.int64)
        out[: nx + 1] = R
        if ny:
            out[nx + 1 :] = out_right[ny - 1 :: -1][: ny]
        return out

    def _char_row(self, R, din_l, ins_cost, sym, row, xs):
        back = self.back
        suff = np.minimum.accumulate((R + xs * back)[::-1])[::-1]
        cur = R + ins_cost
        if len(xs) > 1:
            np.minimum(cur[1:], R[:-1] + self.w.cells[self.X, sym], out=cur[1:])
        cur[0] = min(cur[0], int(din_l[row]))
        np.minimum(cur, suff - xs * back + ins_cost, out=cur)
        acc = np.minimum.accumulate(cur - self.del_pre)
        return acc + self.del_pre

    def _fold_fragment(self, R, din_l, fi, fj, q):
        """Cross X x Y[fi:fj) (matched at rows [q, q+fj-fi)) via stored chains."""
        nx = len(self.X)
        back = self.back
        length = fj - fi
        xs = np.arange(nx + 1, dtype=np.int64)
        suff_all = np.minimum.accumulate((R + xs * back)[::-1])[::-1]
        rights_parts: list[np.ndarray] = []
        pos = fi
        row = q
        for t, a in self._dyadic_pieces(fi, fj):
            lo, hi = self.fragment_span(t, a)
            plen = hi - lo
            if not self.has_level(t):
                for d in range(plen):
                    R = self._char_row(
                        R, din_l, int(self.w.cells[self.w.eps, self.Y[lo + d]]),
                        int(self.Y[lo + d]), row + d + 1, xs,
                    )
                    rights_parts.append(R[nx : nx + 1])
            else:
                R, part_rights = self._fold_chain(self.chain(t, a), R, din_l, plen, row)
                rights_parts.append(part_rights)
            pos += plen
            row += plen
        assert pos == fj
        # paths entering the fragment's top row and walking back left
        seg = self.w.cells[self.w.eps, self.Y[fi:fj]].sum()
        np.minimum(R, suff_all - xs * back + seg, out=R)
        rights = np.concatenate(rights_parts) if rights_parts else np.zeros(0, np.int64)
        return R, rights

    def _fold_chain(self, blocks, R, din_l, plen, q):
        """Push the running row through one chain; returns (new row, right column).

        The right column comes back as values for rows q+1 .. q+plen of the
        rectangle's right boundary.
        """
        left = din_l[q : q + plen + 1].copy()  # indexed by local row 0..plen
        left[0] = min(left[0], int(R[0]))
        newR = np.empty_like(R)
        xb = 0
        for tree in blocks:
            wb = len(tree.X)
            vec = np.empty(wb + plen + 1, dtype=np.int64)
            vec[: plen + 1] = left[::-1]
            vec[plen] = min(vec[plen], int(R[xb]))
            if wb:
                vec[plen + 1 :] = R[xb + 1 : xb + wb + 1]
            out, _ = vec_minplus(vec, tree.bm)
            if xb:
                newR[xb] = min(int(newR[xb]), int(out[0]))
                newR[xb + 1 : xb + wb + 1] = out[1 : wb + 1]
            else:
                newR[: wb + 1] = out[: wb + 1]
            left = np.empty(plen + 1, dtype=np.int64)
            left[plen] = out[wb]
            if plen:
                left[:plen] = out[wb + plen : wb : -1]
            xb += wb
        return newR, left[1:].copy()

    def _propagate_rows(self, Yp, v) -> np.ndarray:
        """Plain row sweep for heavily edited targets (|Y'| > 2|Y|)."""
        nx = len(self.X)
        ny = len(Yp)
        if len(v) != nx + ny + 1:
            raise ValueError(f"vector must have {nx + ny + 1} entries")
        ins_costs = self.w.cells[self.w.eps, Yp] if ny else np.zeros(0, np.int64)
        ins_pre = np.concatenate(([0], np.cumsum(ins_costs)))
        din_t, din_l = self._boundary_closures(v, ins_pre)
        sub = self.w.cells[self.X[:, None], Yp[None, :]] if nx and ny else np.zeros((nx, ny), np.int64)
        D = dense_grid(din_t, din_l, self.del_costs, ins_costs, sub, self.back)
        out = np.empty(nx + ny + 1, dtype=np.int64)
        out[: nx + 1] = D[:, ny]
        if ny:
            out[nx + 1 :] = D[nx, ny - 1 :: -1][: ny]
        return out

    def propagate_dense(self, script: EditScript, v) -> np.ndarray:
        """Same contract as :meth:`propagate` via the dense grid kernel.

        O(|X| * |Y'|) with a tiny constant; preferable for the
        Theta(k) x Theta(k) rectangles the dynamic structure sweeps, where
        the phrase machinery's bookkeeping outweighs its asymptotics.
        """
        D, Yp = self.dense_distances(script, v)
        nx, ny = len(self.X), len(Yp)
        out = np.empty(nx + ny + 1, dtype=np.int64)
        out[: nx + 1] = D[:, ny]
        if ny:
            out[nx + 1 :] = D[nx, ny - 1 :: -1][: ny]
        return out

    # -- path reconstruction -------------------------------------------------

    def dense_distances(self, script: EditScript, v) -> tuple[np.ndarray, np.ndarray]:
        """Full source-distance grid over X x Y' plus Y' (for backtracking)."""
        Yp = script.apply(self.Y)
        nx, ny = len(self.X), len(Yp)
        v = np.asarray(v, dtype=np.int64)
        if len(v) != nx + ny + 1:
            raise ValueError(f"vector must have {nx + ny + 1} entries")
        ins_costs = self.w.cells[self.w.eps, Yp] if ny else np.zeros(0, np.int64)
        ins_pre = np.concatenate(([0], np.cumsum(ins_costs)))
        din_t, din_l = self._boundary_closures(v, ins_pre)
        sub = self.w.cells[self.X[:, None], Yp[None, :]] if nx and ny else np.zeros((nx, ny), np.int64)
        return dense_grid(din_t, din_l, self.del_costs, ins_costs, sub, self.back), Yp

    def backtrack(self, script: EditScript, v, out_index: int):
        """(entry input index, vertex path) for one output of X x Y'.

        Follows exact-cost arms through the dense grid; anti-ordered hops
        emit their canonical staircases.  Deterministic: arm order is
        diagonal, horizontal, vertical, previous-row crossing, boundary
        entry.
        """
        D, Yp = self.dense_distances(script, v)
        v = np.asarray(v, dtype=np.int64)
        nx, ny = len(self.X), len(Yp)
        ins_costs = self.w.cells[self.w.eps, Yp] if ny else np.zeros(0, np.int64)
        ins_pre = np.concatenate(([0], np.cumsum(ins_costs)))
        back = self.back
        x, y = (out_index, ny) if out_index <= nx else (nx, ny - (out_index - nx))
        path = [(x, y)]

        def vin(xx, yy):
            idx = ny - yy if xx == 0 else ny + xx
            if (xx == 0 or yy == 0) and v[idx] < INF_CUT:
                return int(v[idx]), idx
            return None, None

        while True:
            here = int(D[x, y])
            direct, idx = vin(x, y)
            if direct == here:
                path.reverse()
                return idx, path
            if x > 0 and y > 0 and int(D[x - 1, y - 1]) + int(self.w.cells[self.X[x - 1], Yp[y - 1]]) == here:
                x, y = x - 1, y - 1
                path.append((x, y))
                continue
            if x > 0 and int(D[x - 1, y]) + int(self.del_costs[x - 1]) == here:
                x -= 1
                path.append((x, y))
                continue
            if y > 0 and int(D[x, y - 1]) + int(ins_costs[y - 1]) == here:
                y -= 1
                path.append((x, y))
                continue
            if y > 0:
                hit = None
                for xa in range(x + 1, nx + 1):
                    if int(D[xa, y - 1]) + (xa - x) * back + int(ins_costs[y - 1]) == here:
                        hit = xa
                        break
                if hit is not None:
                    # crossed down at column hit, then walked back left along row y
                    for xx in range(x + 1, hit + 1):
                        path.append((xx, y))
                    path.append((hit, y - 1))
                    x, y = hit, y - 1
                    continue
            # boundary entry routed along the rim
            if x == 0:
                res = self._resolve_left_entry(v, ins_pre, y, here, ny)
            else:
                res = self._resolve_top_entry(v, x, here, ny)
            if res is not None:
                idx, rim = res
                path.extend(rim)
                path.reverse()
                return idx, path
            raise AssertionError(f"no arm matches at {(x, y)}")

    def _resolve_left_entry(self, v, ins_pre, y, target, ny):
        back = self.back
        for ya in range(ny + 1):
            val = v[ny - ya]
            if val >= INF_CUT:
                continue
            if ya <= y:
                cost = int(val) + int(ins_pre[y] - ins_pre[ya])
            else:
                cost = int(val) + (ya - y) * back
            if cost == target:
                step = 1 if ya > y else -1
                rim = [(0, yy) for yy in range(y + step, ya + step, step)]
                return ny - ya, rim
        for xa in range(1, len(self.X) + 1):
            val = v[ny + xa]
            if val < INF_CUT and int(val) + xa * back + int(ins_pre[y]) == target:
                rim = [(0, yy) for yy in range(y - 1, -1, -1)]
                rim += [(xx, 0) for xx in range(1, xa + 1)]
                return ny + xa, rim
        return None

    def _resolve_top_entry(self, v, x, target, ny):
        back = self.back
        for xa in range(len(self.X) + 1):
            val = v[ny + xa] if xa else v[ny]
            if val >= INF_CUT:
                continue
            if xa <= x:
                cost = int(val) + int(self.del_pre[x] - self.del_pre[xa])
            else:
                cost = int(val) + (xa - x) * back
            if cost == target:
                step = 1 if xa > x else -1
                rim = [(xx, 0) for xx in range(x + step, xa + step, step)]
                return (ny + xa) if xa else ny, rim
        for ya in range(1, ny + 1):
            val = v[ny - ya]
            if val < INF_CUT and int(val) + ya * back + int(self.del_pre[x]) == target:
                rim = [(xx, 0) for xx in range(x - 1, -1, -1)]
                rim += [(0, yy) for yy in range(1, ya + 1)]
                return ny - ya, rim
        return None

    def box_path(self, script: EditScript, a: int, b: int) -> list[tuple[int, int]]:
        """Shortest path between input a and output b of X x Y'."""
        Yp = script.apply(self.Y)
        size = len(self.X) + len(Yp) + 1
        if not (0 <= a < size and 0 <= b < size):
            raise IndexError("boundary index out of range")
        v = np.full(size, INF_I64, dtype=np.int64)
        v[a] = 0
        entry, path = self.backtrack(script, v, b)
        assert entry == a
        return path


def build_box_oracle(X, Y, w: WeightTable, W: int | None = None, **kw) -> BoxOracle:
    return BoxOracle(X, Y, w, W, **kw)
