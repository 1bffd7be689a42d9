"""Fully persistent range composition over the restricted Monge semigroup.

A leaf-based height-balanced tree; every internal node caches the ordered
semigroup product of its subtree.  All nodes are immutable, so split and
concatenate share structure with their inputs and old versions stay valid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .monge import SemiElem, sem_mul


class _Leaf:
    __slots__ = ("product",)

    size = 1
    height = 1
    is_leaf = True

    def __init__(self, elem: SemiElem):
        self.product = elem


class _Branch:
    __slots__ = ("left", "right", "product", "size", "height")

    is_leaf = False

    def __init__(self, left, right, cap: int):
        self.left = left
        self.right = right
        self.product = sem_mul(left.product, right.product, cap)
        self.size = left.size + right.size
        self.height = 1 + max(left.height, right.height)


def _join(l, r, cap: int):
    """Height-balanced persistent join; O(|height difference|) new nodes."""
    if abs(l.height - r.height) <= 1:
        return _Branch(l, r, cap)
    if l.height > r.height:
        nl, nr = l.left, _join(l.right, r, cap)
        if nr.height <= nl.height + 1:
            return _Branch(nl, nr, cap)
        if nr.left.height > nr.right.height:
            return _Branch(
                _Branch(nl, nr.left.left, cap), _Branch(nr.left.right, nr.right, cap), cap
            )
        return _Branch(_Branch(nl, nr.left, cap), nr.right, cap)
    nl, nr = _join(l, r.left, cap), r.right
    if nl.height <= nr.height + 1:
        return _Branch(nl, nr, cap)
    if nl.right.height > nl.left.height:
        return _Branch(
            _Branch(nl.left, nl.right.left, cap), _Branch(nl.right.right, nr, cap), cap
        )
    return _Branch(nl.left, _Branch(nl.right, nr, cap), cap)


def _build(elems: Sequence[SemiElem], lo: int, hi: int, cap: int):
    if hi - lo == 1:
        return _Leaf(elems[lo])
    mid = (lo + hi) // 2
    return _Branch(_build(elems, lo, mid, cap), _build(elems, mid, hi, cap), cap)


def _split(node, i: int, cap: int):
    """Split into trees over [0, i) and [i, size); 0 < i < size."""
    if node.is_leaf:
        raise AssertionError("split inside a leaf")
    ls = node.left.size
    if i == ls:
        return node.left, node.right
    if i < ls:
        a, b = _split(node.left, i, cap)
        return a, _join(b, node.right, cap)
    a, b = _split(node.right, i - ls, cap)
    return _join(node.left, a, cap), b


def _cover(node, lo: int, hi: int, out: list) -> None:
    if lo <= 0 and hi >= node.size:
        out.append(node)
        return
    ls = node.left.size
    if lo < ls:
        _cover(node.left, lo, min(hi, ls), out)
    if hi > ls:
        _cover(node.right, max(lo - ls, 0), hi - ls, out)


@dataclass(frozen=True)
class RangeTree:
    """One immutable version of the list; operations return new versions."""

    root: object
    cap: int

    def __len__(self) -> int:
        return self.root.size

    @property
    def product(self) -> SemiElem:
        return self.root.product


def rt_build(elems: Sequence[SemiElem], cap: int) -> RangeTree:
    if not len(elems):
        raise ValueError("list must be nonempty")
    return RangeTree(_build(list(elems), 0, len(elems), cap), cap)


def rt_split(t: RangeTree, i: int) -> tuple[RangeTree, RangeTree]:
    if not 1 <= i < len(t):
        raise ValueError(f"split index {i} out of [1,{len(t)})")
    a, b = _split(t.root, i, t.cap)
    return RangeTree(a, t.cap), RangeTree(b, t.cap)


def rt_concat(t1: RangeTree, t2: RangeTree) -> RangeTree:
    if t1.cap != t2.cap:
        raise ValueError("mismatched semigroup caps")
    return RangeTree(_join(t1.root, t2.root, t1.cap), t1.cap)


def rt_cover_nodes(t: RangeTree, lo: int, hi: int) -> list:
    """Canonical node cover of [lo, hi); products fold left-to-right."""
    if not 0 <= lo < hi <= len(t):
        raise ValueError(f"bad range [{lo},{hi}) for size {len(t)}")
    out: list = []
    _cover(t.root, lo, hi, out)
    return out


def rt_query(t: RangeTree, lo: int, hi: int) -> list[SemiElem]:
    """References whose ordered product equals the range product.

    At most 2*ceil(log2 |L|) + 2 references; if a lopsided tree shape ever
    yields more, adjacent references are multiplied together to restore
    the bound.
    """
    refs = [n.product for n in rt_cover_nodes(t, lo, hi)]
    bound = 2 * max(1, (len(t) - 1).bit_length()) + 2
    while len(refs) > bound:
        merged = []
        for i in range(0, len(refs) - 1, 2):
            merged.append(sem_mul(refs[i], refs[i + 1], t.cap))
        if len(refs) % 2:
            merged.append(refs[-1])
        refs = merged
    return refs
