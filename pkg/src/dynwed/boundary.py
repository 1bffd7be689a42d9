"""Hierarchical boundary-distance matrices over one alignment-grid rectangle.

The tree recursively halves the rectangle along its longer side and merges
children boundary matrices: same-side entries are copied, separator
crossings go through one Monge min-plus product, and anti-ordered pairs
(where every monotone path is shortest) use a closed form of back-edge
steps plus a forward prefix sum.  Leaves fall back to per-source forward
DP.  Entries are exact augmented-graph distances, O(1) at the root.
"""

from __future__ import annotations

import numpy as np

from ._kernels import INF_I64, bm_direct
from .core import WeightTable, symbols
from .monge import minplus

DEFAULT_LEAF_SIDE = 2


def dyadic_fragment_params(c: int, ylen: int) -> tuple[int, int, int]:
    """(e_c, l_c, r_c): dyadic radius around position c of a length-ylen string.

    e_c is the 2-adic valuation of c; c = 0 gets ceil(log2 ylen) so its
    right fragment spans everything.
    """
    if not 0 <= c <= ylen:
        raise ValueError(f"position {c} out of [0,{ylen}]")
    if c == 0:
        e = (ylen - 1).bit_length() if ylen > 1 else 0
    else:
        e = (c & -c).bit_length() - 1
    return e, max(0, c - (1 << e)), min(ylen, c + (1 << e))


def split_simple(i: int, j: int, ylen: int) -> int:
    """Position in [i..j] with maximal dyadic radius; both halves are simple."""
    if not 0 <= i < j <= ylen:
        raise ValueError(f"bad fragment [{i},{j}) of length-{ylen} string")
    if i == 0:
        return 0
    for t in range(j.bit_length(), -1, -1):
        c = ((i + (1 << t) - 1) >> t) << t
        if c <= j:
            return c
    raise AssertionError("unreachable: t=0 always admits a multiple")


class _Node:
    __slots__ = ("x0", "y0", "x1", "y1", "bm", "axis", "split", "a", "b")

    def __init__(self, x0, y0, x1, y1):
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1
        self.bm = None
        self.axis = None  # 'x' | 'y' | None for leaves
        self.split = -1
        self.a = None
        self.b = None

    @property
    def w(self) -> int:
        return self.x1 - self.x0

    @property
    def h(self) -> int:
        return self.y1 - self.y0


class BoundaryTree:
    """Boundary-distance structure for the rectangle X x Y.

    Input vertices run up the left side then along the top (clockwise);
    output vertices run along the bottom then up the right side.  Both
    sequences have length |X| + |Y| + 1 and share their last vertex.
    """

    def __init__(self, X, Y, w: WeightTable, W: int | None = None, *, leaf_side: int = DEFAULT_LEAF_SIDE):
        self.X = symbols(X) if not isinstance(X, np.ndarray) else X
        self.Y = symbols(Y) if not isinstance(Y, np.ndarray) else Y
        if len(self.X) < 1 or len(self.Y) < 1:
            raise ValueError("both strings must be nonempty")
        self.w = w
        self.W = w.max_finite if W is None else W
        self.back = self.W + 1
        self.leaf_side = max(1, leaf_side)
        self.del_costs = w.cells[self.X, w.eps]
        self.ins_costs = w.cells[w.eps, self.Y]
        self.del_pre = np.concatenate(([0], np.cumsum(self.del_costs)))
        self.ins_pre = np.concatenate(([0], np.cumsum(self.ins_costs)))
        self.root = self._build(0, 0, len(self.X), len(self.Y))

    # -- construction ------------------------------------------------------

    def _build(self, x0, y0, x1, y1) -> _Node:
        node = _Node(x0, y0, x1, y1)
        w, h = node.w, node.h
        if min(w, h) <= self.leaf_side:
            node.bm = self._leaf_bm(x0, y0, x1, y1)
            return node
        if w >= h:
            node.axis = "x"
            node.split = x0 + w // 2
            node.a = self._build(x0, y0, node.split, y1)
            node.b = self._build(node.split, y0, x1, y1)
            node.bm = self._merge_x(node)
        else:
            node.axis = "y"
            node.split = y0 + h // 2
            node.a = self._build(x0, y0, x1, node.split)
            node.b = self._build(x0, node.split, x1, y1)
            node.bm = self._merge_y(node)
        return node

    def _leaf_bm(self, x0, y0, x1, y1) -> np.ndarray:
        sub = self.w.cells[self.X[x0:x1, None], self.Y[None, y0:y1]]
        return bm_direct(self.del_costs[x0:x1], self.ins_costs[y0:y1], sub, self.back)

    def _merge_x(self, node: _Node) -> np.ndarray:
        A, B = node.a.bm, node.b.bm
        h = node.h
        wl = node.split - node.x0
        w = node.w
        P = np.empty((h + 1 + w, w + 1 + h), dtype=np.int64)
        P[: h + wl + 1, : wl + 1] = A[:, : wl + 1]
        P[: h + wl + 1, wl + 1 :] = minplus(A[:, wl : wl + h + 1], B[: h + 1, 1:])
        P[h + wl + 1 :, wl + 1 :] = B[h + 1 :, 1:]
        # anti-ordered: top-row inputs right of the split to bottom outputs left of it
        xi = np.arange(node.split + 1, node.x1 + 1)
        xj = np.arange(node.x0, node.split + 1)
        ins_sum = self.ins_pre[node.y1] - self.ins_pre[node.y0]
        P[h + wl + 1 :, : wl + 1] = (xi[:, None] - xj[None, :]) * self.back + ins_sum
        return P

    def _merge_y(self, node: _Node) -> np.ndarray:
        T, B = node.a.bm, node.b.bm
        w = node.w
        h = node.h
        hb = node.y1 - node.split
        P = np.empty((h + 1 + w, w + 1 + h), dtype=np.int64)
        P[:hb, : w + hb + 1] = B[:hb, :]
        P[hb:, : w + hb + 1] = minplus(T[:, : w + 1], B[hb : hb + w + 1, :])
        P[hb:, w + hb + 1 :] = T[:, w + 1 :]
        # anti-ordered: left-column inputs below the split to right outputs above it
        yi = np.arange(node.y1, node.split, -1)
        yj = np.arange(node.split - 1, node.y0 - 1, -1)
        del_sum = self.del_pre[node.x1] - self.del_pre[node.x0]
        P[:hb, w + hb + 1 :] = (yi[:, None] - yj[None, :]) * self.back + del_sum
        return P

    # -- queries -----------------------------------------------------------

    @property
    def bm(self) -> np.ndarray:
        return self.root.bm

    @property
    def size(self) -> int:
        return len(self.X) + len(self.Y) + 1

    def input_vertex(self, i: int) -> tuple[int, int]:
        h = len(self.Y)
        if not 0 <= i < self.size:
            raise IndexError(f"input index {i} out of range")
        return (0, h - i) if i <= h else (i - h, 0)

    def output_vertex(self, j: int) -> tuple[int, int]:
        w, h = len(self.X), len(self.Y)
        if not 0 <= j < self.size:
            raise IndexError(f"output index {j} out of range")
        return (j, h) if j <= w else (w, h - (j - w))

    def bm_entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.size and 0 <= j < self.size):
            raise IndexError("boundary index out of range")
        return int(self.root.bm[i, j])

    def submatrix(self, rows: slice | np.ndarray, cols: slice | np.ndarray) -> np.ndarray:
        block = self.root.bm[rows][:, cols]
        return np.ascontiguousarray(block)

    def reconstruct_path(self, i: int, j: int) -> list[tuple[int, int]]:
        """Vertices of one shortest input->output path, lowest-split ties."""
        self.bm_entry(i, j)  # bounds check
        return self._path(self.root, i, j)

    # node-level input/output mappings mirror the global ones

    def _node_in(self, n: _Node, i: int) -> tuple[int, int]:
        return (n.x0, n.y1 - i) if i <= n.h else (n.x0 + i - n.h, n.y0)

    def _node_out(self, n: _Node, j: int) -> tuple[int, int]:
        return (n.x0 + j, n.y1) if j <= n.w else (n.x1, n.y1 - (j - n.w))

    def _path(self, n: _Node, i: int, j: int) -> list[tuple[int, int]]:
        vi = self._node_in(n, i)
        vj = self._node_out(n, j)
        if vi == vj:
            return [vi]
        if n.axis is None:
            return self._leaf_path(n, vi, vj)
        if n.axis == "x":
            wl = n.split - n.x0
            left_in = i <= n.h + wl
            left_out = j <= wl
            if left_in and left_out:
                return self._path(n.a, i, j)
            if not left_in and not left_out:
                return self._path(n.b, i - wl, j - wl)
            if left_in:
                A, B = n.a.bm, n.b.bm
                cand = A[i, wl : wl + n.h + 1] + B[: n.h + 1, j - wl]
                s = int(np.argmin(cand))
                first = self._path(n.a, i, wl + s)
                second = self._path(n.b, s, j - wl)
                return first + second[1:]
            return self._anti_path(vi, vj)
        hb = n.y1 - n.split
        bottom_in = i < hb
        bottom_out = j <= n.w + hb
        if bottom_in and bottom_out:
            return self._path(n.b, i, j)
        if not bottom_in and not bottom_out:
            return self._path(n.a, i - hb, j - hb)
        if not bottom_in:
            T, B = n.a.bm, n.b.bm
            cand = T[i - hb, : n.w + 1] + B[hb : hb + n.w + 1, j]
            s = int(np.argmin(cand))
            first = self._path(n.a, i - hb, s)
            second = self._path(n.b, hb + s, j)
            return first + second[1:]
        return self._anti_path(vi, vj)

    def _anti_path(self, vi: tuple[int, int], vj: tuple[int, int]) -> list[tuple[int, int]]:
        """Canonical monotone path for anti-ordered pairs: y-leg then x-leg."""
        (xi, yi), (xj, yj) = vi, vj
        out = [vi]
        step = 1 if yj >= yi else -1
        for y in range(yi + step, yj + step, step):
            out.append((xi, y))
        step = 1 if xj >= xi else -1
        for x in range(xi + step, xj + step, step):
            out.append((x, yj))
        return out

    def _leaf_path(self, n: _Node, vi, vj) -> list[tuple[int, int]]:
        (xi, yi), (xj, yj) = vi, vj
        if xi > xj or yi > yj:
            return self._anti_path(vi, vj)
        dp = np.full((xj - xi + 1, yj - yi + 1), INF_I64, dtype=np.int64)
        dp[0, 0] = 0
        for x in range(xi, xj + 1):
            r = x - xi
            for y in range(yi, yj + 1):
                c = y - yi
                best = dp[r, c]
                if r > 0:
                    v = dp[r - 1, c] + self.del_costs[x - 1]
                    if v < best:
                        best = v
                if c > 0:
                    v = dp[r, c - 1] + self.ins_costs[y - 1]
                    if v < best:
                        best = v
                if r > 0 and c > 0:
                    v = dp[r - 1, c - 1] + self.w.cells[self.X[x - 1], self.Y[y - 1]]
                    if v < best:
                        best = v
                dp[r, c] = best
        path = [(xj, yj)]
        x, y = xj, yj
        while (x, y) != (xi, yi):
            r, c = x - xi, y - yi
            here = dp[r, c]
            if r > 0 and c > 0 and dp[r - 1, c - 1] + self.w.cells[self.X[x - 1], self.Y[y - 1]] == here:
                x, y = x - 1, y - 1
            elif r > 0 and dp[r - 1, c] + self.del_costs[x - 1] == here:
                x -= 1
            else:
                y -= 1
            path.append((x, y))
        path.reverse()
        return path

    def iter_nodes(self):
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            if n.axis is not None:
                stack.extend((n.a, n.b))


def build_boundary_tree(X, Y, w: WeightTable, W: int | None = None, **kw) -> BoundaryTree:
    return BoundaryTree(X, Y, w, W, **kw)
