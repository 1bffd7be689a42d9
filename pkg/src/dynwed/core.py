"""Shared value types: weights, symbol strings, edits, and alignments.

Weights are exact scaled integers: every cost is an integer numerator in
units of 1/DEN, where DEN is one global denominator declared per instance.
Infinity is the float ``math.inf`` sentinel; it never appears inside a
weight table, only as a result value.  Mixing ints with ``math.inf`` gives
saturating addition and total ordering for free, while finite arithmetic
stays exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

#: Weights are int numerators; INF marks "above threshold / unreachable".
Weight = float | int


def k_equiv(a: Weight, b: Weight, k: Weight) -> bool:
    """True iff a == b or both exceed k (values interchangeable below k)."""
    return a == b or min(a, b) > k


# ---------------------------------------------------------------------------
# Weight tables


@dataclass(frozen=True)
class Violation:
    """First table cell breaking normalization, with the broken rule."""

    a: int
    b: int
    reason: str


class WeightTable:
    """Dense (sigma+1) x (sigma+1) cost table over a dense integer alphabet.

    Row/column index ``sigma`` stands for epsilon (insertion/deletion
    costs).  Cells are finite int64 numerators over the table's ``den``.
    A normalized table has a zero diagonal and every off-diagonal cell
    >= den (every edit costs at least one unit).
    """

    __slots__ = ("sigma", "den", "cells")

    def __init__(self, sigma: int, den: int, cells) -> None:
        if sigma < 1:
            raise ValueError("alphabet must contain at least one symbol")
        if den < 1:
            raise ValueError("denominator must be positive")
        cells = np.asarray(cells, dtype=np.int64)
        if cells.shape != (sigma + 1, sigma + 1):
            raise ValueError(f"cells must be {(sigma + 1, sigma + 1)}, got {cells.shape}")
        self.sigma = sigma
        self.den = den
        self.cells = cells
        self.cells.setflags(write=False)

    @property
    def eps(self) -> int:
        """Reserved index for the empty symbol."""
        return self.sigma

    @classmethod
    def unit(cls, sigma: int, den: int = 1) -> "WeightTable":
        """Unweighted costs: 0 on the diagonal, one unit elsewhere."""
        cells = np.full((sigma + 1, sigma + 1), den, dtype=np.int64)
        np.fill_diagonal(cells, 0)
        return cls(sigma, den, cells)

    def validate(self) -> Violation | None:
        """Return None if normalized, else the first offending cell."""
        n = self.sigma + 1
        for a in range(n):
            if self.cells[a, a] != 0:
                return Violation(a, a, f"diagonal cell is {self.cells[a, a]}, expected 0")
        for a in range(n):
            for b in range(n):
                if a != b and self.cells[a, b] < self.den:
                    return Violation(a, b, f"cost {self.cells[a, b]} is below one unit ({self.den})")
        return None

    def require_valid(self) -> "WeightTable":
        v = self.validate()
        if v is not None:
            raise ValueError(f"weight table not normalized at ({v.a},{v.b}): {v.reason}")
        return self

    def cap(self, k: int) -> "WeightTable":
        """Clamp every cell to (k+1) units; distances <= k are unaffected."""
        if k < 1:
            raise ValueError("threshold must be >= 1")
        cap_num = (k + 1) * self.den
        return WeightTable(self.sigma, self.den, np.minimum(self.cells, cap_num))

    @property
    def max_finite(self) -> int:
        """Largest cell numerator; the augmented graph's W."""
        return int(self.cells.max())

    def sub(self, a: int, b: int) -> int:
        return int(self.cells[a, b])

    def delete(self, a: int) -> int:
        return int(self.cells[a, self.sigma])

    def insert(self, b: int) -> int:
        return int(self.cells[self.sigma, b])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeightTable)
            and self.sigma == other.sigma
            and self.den == other.den
            and bool((self.cells == other.cells).all())
        )

    def __repr__(self) -> str:
        return f"WeightTable(sigma={self.sigma}, den={self.den})"


def validate_weights(table: WeightTable) -> Violation | None:
    return table.validate()


def cap_weights(table: WeightTable, k: int) -> WeightTable:
    return table.cap(k)


# ---------------------------------------------------------------------------
# Strings

Symbols = np.ndarray


def symbols(seq: Iterable[int]) -> Symbols:
    """Normalize a symbol-id sequence to an immutable int64 array."""
    arr = np.asarray(list(seq) if not isinstance(seq, np.ndarray) else seq, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("a string is a flat sequence of symbol ids")
    arr.setflags(write=False)
    return arr


def check_alphabet(s: Symbols, sigma: int) -> None:
    if len(s) and (s.min() < 0 or s.max() >= sigma):
        raise ValueError(f"symbol id out of range [0,{sigma})")


# ---------------------------------------------------------------------------
# Edits and scripts

INS = "ins"
DEL = "del"
SUB = "sub"


@dataclass(frozen=True)
class Edit:
    """One character edit; ``pos`` indexes the string it is applied to."""

    kind: str
    pos: int
    sym: int | None = None

    def __post_init__(self):
        if self.kind not in (INS, DEL, SUB):
            raise ValueError(f"unknown edit kind {self.kind!r}")
        if self.kind in (INS, SUB) and self.sym is None:
            raise ValueError(f"{self.kind} requires a symbol")
        if self.kind == DEL and self.sym is not None:
            raise ValueError("delete takes no symbol")


def apply_edit(s: Symbols, e: Edit) -> Symbols:
    """Apply one edit, returning a new array."""
    n = len(s)
    if e.kind == INS:
        if not 0 <= e.pos <= n:
            raise IndexError(f"insert position {e.pos} out of [0,{n}]")
        return symbols(np.concatenate([s[: e.pos], [e.sym], s[e.pos :]]))
    if not 0 <= e.pos < n:
        raise IndexError(f"edit position {e.pos} out of [0,{n})")
    if e.kind == DEL:
        return symbols(np.concatenate([s[: e.pos], s[e.pos + 1 :]]))
    out = s.copy()
    out[e.pos] = e.sym
    return symbols(out)


class EditScript:
    """Canonical edit list: the breakpoint form of one alignment source->target.

    Edits are sorted by source position; at a shared position all inserts
    come first (in target order) followed by at most one substitute or
    delete.  Anything else is rejected rather than normalized.
    """

    __slots__ = ("edits",)

    def __init__(self, edits: Sequence[Edit]):
        edits = tuple(edits)
        prev_pos = -1
        tail_blocked = False  # a sub/del was seen at prev_pos
        for e in edits:
            if e.pos < prev_pos:
                raise ValueError("script positions must be non-decreasing")
            if e.pos == prev_pos:
                if tail_blocked:
                    raise ValueError(f"several sub/del edits at position {e.pos}")
                if e.kind != INS:
                    tail_blocked = True
            else:
                prev_pos = e.pos
                tail_blocked = e.kind in (SUB, DEL)
        self.edits = edits

    def __len__(self) -> int:
        return len(self.edits)

    def __iter__(self):
        return iter(self.edits)

    def __eq__(self, other) -> bool:
        return isinstance(other, EditScript) and self.edits == other.edits

    def __repr__(self) -> str:
        return f"EditScript({list(self.edits)!r})"

    def check_source(self, n: int) -> None:
        """Validate positions against a source of length n."""
        for e in self.edits:
            hi = n if e.kind == INS else n - 1
            if not 0 <= e.pos <= hi:
                raise ValueError(f"{e.kind} at {e.pos} out of range for length {n}")

    def check_canonical(self, s: Symbols) -> None:
        """Positions in range and no zero-cost substitutions."""
        self.check_source(len(s))
        for e in self.edits:
            if e.kind == SUB and s[e.pos] == e.sym:
                raise ValueError(f"substitution at {e.pos} replaces a symbol with itself")

    def apply(self, s: Symbols) -> Symbols:
        """Build the target string; length changes by inserts - deletes."""
        self.check_canonical(s)
        out: list[int] = []
        x = 0
        for e in self.edits:
            while x < e.pos:
                out.append(int(s[x]))
                x += 1
            if e.kind == INS:
                out.append(int(e.sym))
            elif e.kind == SUB:
                out.append(int(e.sym))
                x += 1
            else:
                x += 1
        out.extend(int(v) for v in s[x:])
        return symbols(out)

    def target_len(self, n: int) -> int:
        ins = sum(1 for e in self.edits if e.kind == INS)
        dels = sum(1 for e in self.edits if e.kind == DEL)
        return n + ins - dels

    def shift_before(self, p: int) -> int:
        """Net target-position offset contributed by edits strictly before p."""
        d = 0
        for e in self.edits:
            if e.pos >= p:
                break
            if e.kind == INS:
                d += 1
            elif e.kind == DEL:
                d -= 1
        return d

    def pos_map(self, p: int) -> int:
        """Image of source grid vertex p on the target axis."""
        return p + self.shift_before(p)

    def to_breakpoints(self, n: int) -> list[tuple[int, int]]:
        """Breakpoint pairs of the alignment this script encodes."""
        self.check_source(n)
        pairs = [(0, 0)]
        x = y = 0
        for e in self.edits:
            dx = e.pos - x
            x, y = e.pos, y + dx  # skip over matches
            if (x, y) != pairs[-1]:
                pairs.append((x, y))
            if e.kind == INS:
                y += 1
            elif e.kind == DEL:
                x += 1
            else:
                x += 1
                y += 1
        end = (n, y + (n - x))
        if end != pairs[-1]:
            pairs.append(end)
        return pairs

    @classmethod
    def from_breakpoints(
        cls, pairs: Sequence[tuple[int, int]], source: Symbols, target: Symbols
    ) -> "EditScript":
        """Recover the canonical script from alignment breakpoints."""
        validate_breakpoints(pairs, len(source), len(target))
        edits: list[Edit] = []
        for (x0, y0), (x1, y1) in zip(pairs, pairs[1:]):
            gx, gy = x1 - x0, y1 - y0
            if gx == gy:
                if source[x0] != target[y0]:
                    edits.append(Edit(SUB, x0, int(target[y0])))
            elif gx == gy + 1:
                edits.append(Edit(DEL, x0))
            else:
                edits.append(Edit(INS, x0, int(target[y0])))
        return cls(edits)


def apply_edits(s: Symbols, script: EditScript) -> Symbols:
    return script.apply(s)


# ---------------------------------------------------------------------------
# Breakpoints

Breakpoints = Sequence[tuple[int, int]]


def identity_breakpoints(n: int, m: int | None = None) -> list[tuple[int, int]]:
    if m is None:
        m = n
    if n != m:
        raise ValueError("identity alignment needs equal lengths")
    return [(0, 0), (n, n)] if n else [(0, 0)]


def validate_breakpoints(pairs: Breakpoints, nx: int, ny: int) -> None:
    """Check endpoint, monotonicity, and gap-shape constraints."""
    if not pairs:
        raise ValueError("empty breakpoint sequence")
    if pairs[0] != (0, 0) or pairs[-1] != (nx, ny):
        raise ValueError(f"breakpoints must span (0,0)..({nx},{ny})")
    for (x0, y0), (x1, y1) in zip(pairs, pairs[1:]):
        gx, gy = x1 - x0, y1 - y0
        if gx < 0 or gy < 0 or (gx, gy) == (0, 0):
            raise ValueError(f"non-monotone step {(x0, y0)} -> {(x1, y1)}")
        if abs(gx - gy) > 1:
            raise ValueError(f"gap {(gx, gy)} cannot be one edit plus matches")
        if not (0 <= x1 <= nx and 0 <= y1 <= ny):
            raise ValueError(f"pair {(x1, y1)} out of grid")


def alignment_cost(X: Symbols, Y: Symbols, pairs: Breakpoints, w: WeightTable) -> int:
    """Total edge cost of the alignment encoded by ``pairs``.

    Between consecutive stored pairs the path takes one edit edge and then
    matched diagonal steps; the matched positions must actually be equal.
    """
    validate_breakpoints(pairs, len(X), len(Y))
    total = 0
    for (x0, y0), (x1, y1) in zip(pairs, pairs[1:]):
        gx, gy = x1 - x0, y1 - y0
        ax, ay = x0, y0
        if gx == gy:
            if X[x0] != Y[y0]:
                total += w.sub(int(X[x0]), int(Y[y0]))
                ax, ay = x0 + 1, y0 + 1
        elif gx == gy + 1:
            total += w.delete(int(X[x0]))
            ax = x0 + 1
        else:
            total += w.insert(int(Y[y0]))
            ay = y0 + 1
        for t in range(x1 - ax):
            if X[ax + t] != Y[ay + t]:
                raise ValueError(f"implicit match at ({ax + t},{ay + t}) differs")
    return total


def compress_breakpoints(
    X: Symbols, Y: Symbols, pairs: Sequence[tuple[int, int]]
) -> list[tuple[int, int]]:
    """Drop interior pairs that sit inside matched runs.

    Stitching per-box path fragments leaves separator vertices in the
    sequence even when the path matches straight through them; the
    canonical form keeps endpoints and edit vertices only.
    """
    if len(pairs) <= 2:
        return list(pairs)
    out = [pairs[0]]
    for idx in range(1, len(pairs) - 1):
        x, y = pairs[idx]
        x1, y1 = pairs[idx + 1]
        gx, gy = x1 - x, y1 - y
        if gx == gy and gx > 0 and X[x] == Y[y]:
            continue  # leaving edge is a match
        out.append((x, y))
    out.append(pairs[-1])
    return out
