"""Dynamic weighted edit distance with a fixed threshold over two strings.

The session keeps X inside the dynamic chain structure and Y only as a
string.  After an update it recomputes an optimal unweighted alignment of
X onto Y from scratch (the folklore quadratic-in-k approach the chain
structure is built to consume) and, unless that already exceeds the
threshold, feeds it into the threshold-doubling query as the edit script.
"""

from __future__ import annotations

import numpy as np

from .core import INF, Edit, EditScript, WeightTable, symbols
from .dyn_wed import DynWedMulti
from .pillar_lv import FRope, lv_ed


class Session:
    """Maintain X and Y under character edits; report ed^w_{<=k}(X, Y)."""

    def __init__(self, X, Y, k: int, w: WeightTable, *, lazy_reports: bool = False):
        if k < 1:
            raise ValueError("threshold must be >= 1")
        w.require_valid()
        self.k = k
        self.den = w.den
        self.w = w
        self.x_rope = FRope.from_symbols(symbols(X))
        self.y_rope = FRope.from_symbols(symbols(Y))
        self._x_mirror = self.x_rope.to_array()
        self._y_mirror = self.y_rope.to_array()
        self.multi = DynWedMulti(self._x_mirror, k, w)
        self.lazy_reports = lazy_reports
        self._last: tuple | None = None

    @property
    def X(self) -> np.ndarray:
        return self._x_mirror

    @property
    def Y(self) -> np.ndarray:
        return self._y_mirror

    def update(self, target: str, e: Edit):
        """Apply one edit to X or Y; returns the new report unless lazy."""
        if target == "X":
            self.x_rope = self.x_rope.edit(e)
            self._x_mirror = self.x_rope.to_array()
            self.multi.edit(e)
        elif target == "Y":
            self.y_rope = self.y_rope.edit(e)
            self._y_mirror = self.y_rope.to_array()
        else:
            raise ValueError(f"unknown target {target!r}; expected 'X' or 'Y'")
        self._last = None
        if self.lazy_reports:
            return None
        return self.report()

    def report(self):
        """Current ed^w_{<=k}(X, Y) numerator, or inf."""
        if self._last is None:
            self._last = self._compute(want_alignment=False)
        return self._last[0]

    def alignment(self):
        """(value, breakpoints) for the current pair; (inf, None) if above k."""
        if self._last is None or (self._last[0] is not INF and self._last[1] is None):
            self._last = self._compute(want_alignment=True)
        return self._last

    def _compute(self, want_alignment: bool):
        hint = lv_ed(self._x_mirror, self._y_mirror, self.k)
        if hint is None:
            return INF, None
        _, bps = hint
        script = EditScript.from_breakpoints(bps, self._x_mirror, self._y_mirror)
        return self.multi.query(script, want_alignment=want_alignment)


def session_new(X, Y, k: int, w: WeightTable, **kw) -> Session:
    return Session(X, Y, k, w, **kw)
