import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dynwed.core import (
    DEL,
    INF,
    INS,
    SUB,
    Edit,
    EditScript,
    WeightTable,
    alignment_cost,
    apply_edits,
    cap_weights,
    compress_breakpoints,
    identity_breakpoints,
    k_equiv,
    symbols,
    validate_weights,
)
from dynwed.dp_oracle import ed_bounded, unit_alignment

from util import random_script, random_string, random_table


class TestWeightTable:
    def test_unit_table_is_valid(self):
        assert validate_weights(WeightTable.unit(4, den=3)) is None

    def test_nonzero_diagonal_reported(self):
        t = WeightTable.unit(4)
        cells = t.cells.copy()
        cells[2, 2] = 1
        v = validate_weights(WeightTable(4, 1, cells))
        assert v is not None and (v.a, v.b) == (2, 2)

    def test_subunit_cost_reported(self):
        t = WeightTable.unit(3, den=5)
        cells = t.cells.copy()
        cells[0, 1] = 4
        v = validate_weights(WeightTable(3, 5, cells))
        assert v is not None and (v.a, v.b) == (0, 1)

    def test_cap_clamps_above_k_plus_one(self):
        t = WeightTable.unit(2, den=1)
        cells = t.cells.copy()
        cells[0, 1] = 5
        cells[1, 0] = 2
        capped = cap_weights(WeightTable(2, 1, cells), 3)
        assert capped.cells[0, 1] == 4  # min(5, k+1)
        assert capped.cells[1, 0] == 2  # below cap untouched
        assert validate_weights(capped) is None

    def test_cap_idempotent_and_monotone(self):
        rng = np.random.default_rng(7)
        t = random_table(rng, 5, 2, hi_units=9)
        c1 = cap_weights(t, 4)
        c2 = cap_weights(c1, 4)
        assert c1 == c2
        assert (c1.cells <= t.cells).all()

    def test_capped_distance_matches_raw_below_threshold(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            sigma, den = 4, int(rng.integers(1, 4))
            t = random_table(rng, sigma, den, hi_units=8)
            k = int(rng.integers(1, 5))
            X = random_string(rng, int(rng.integers(0, 12)), sigma)
            Y = random_string(rng, int(rng.integers(0, 12)), sigma)
            raw, _ = ed_bounded(X, Y, k, t)
            capped, _ = ed_bounded(X, Y, k, cap_weights(t, k))
            assert raw == capped


class TestKEquiv:
    def test_examples(self):
        assert k_equiv(5, 5, 3)
        assert k_equiv(4, 7, 3)
        assert not k_equiv(2, 3, 3)
        assert k_equiv(INF, INF, 3)
        assert k_equiv(INF, 4, 3)

    @given(
        st.one_of(st.integers(0, 20), st.just(INF)),
        st.one_of(st.integers(0, 20), st.just(INF)),
        st.one_of(st.integers(0, 20), st.just(INF)),
        st.integers(0, 20),
    )
    def test_is_equivalence_relation(self, a, b, c, k):
        assert k_equiv(a, a, k)
        assert k_equiv(a, b, k) == k_equiv(b, a, k)
        if k_equiv(a, b, k) and k_equiv(b, c, k):
            assert k_equiv(a, c, k)


class TestApplyEdits:
    def test_single_delete(self):
        s = symbols([0, 1, 2])
        out = apply_edits(s, EditScript([Edit(DEL, 1)]))
        assert list(out) == [0, 2]

    def test_empty_script_is_identity(self):
        s = symbols([3, 1, 4])
        assert list(apply_edits(s, EditScript([]))) == [3, 1, 4]

    def test_length_bookkeeping(self):
        s = symbols([0, 1, 2, 3])
        script = EditScript([Edit(INS, 0, 5), Edit(SUB, 1, 5), Edit(DEL, 3)])
        out = apply_edits(s, script)
        assert len(out) == script.target_len(len(s)) == 4

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            EditScript([Edit(DEL, 3)]).apply(symbols([0, 1]))

    def test_non_canonical_rejected(self):
        with pytest.raises(ValueError):
            EditScript([Edit(DEL, 2), Edit(DEL, 1)])
        with pytest.raises(ValueError):
            EditScript([Edit(SUB, 1, 0), Edit(INS, 1, 0)])
        with pytest.raises(ValueError):
            EditScript([Edit(DEL, 1), Edit(SUB, 1, 0)])

    def test_random_round_trip_bounded_by_script_length(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            s = random_string(rng, int(rng.integers(0, 20)), 4)
            script = random_script(rng, s, 4, 5)
            out = script.apply(s)
            res = unit_alignment(s, out, len(script))
            assert res is not None and res[0] <= len(script)


class TestScriptBreakpointDuality:
    def test_round_trip(self):
        rng = np.random.default_rng(5)
        for _ in range(80):
            s = random_string(rng, int(rng.integers(0, 15)), 3)
            script = random_script(rng, s, 3, 5)
            target = script.apply(s)
            bps = script.to_breakpoints(len(s))
            back = EditScript.from_breakpoints(bps, s, target)
            assert back == script
            assert list(back.apply(s)) == list(target)

    def test_script_length_matches_alignment_cost(self):
        rng = np.random.default_rng(9)
        unit = WeightTable.unit(3)
        for _ in range(40):
            s = random_string(rng, int(rng.integers(1, 15)), 3)
            script = random_script(rng, s, 3, 4)
            target = script.apply(s)
            bps = script.to_breakpoints(len(s))
            assert alignment_cost(s, target, bps, unit) == len(script)


class TestAlignmentCost:
    def test_identity_costs_zero(self):
        s = symbols([0, 1, 2])
        assert alignment_cost(s, s, identity_breakpoints(3), WeightTable.unit(3)) == 0

    def test_delete_all(self):
        w = WeightTable.unit(2, den=4)
        X = symbols([0, 1])
        bps = [(0, 0), (1, 0), (2, 0)]
        assert alignment_cost(X, symbols([]), bps, w) == 2 * 4

    def test_invalid_sequences_rejected(self):
        w = WeightTable.unit(2)
        X = symbols([0, 1])
        with pytest.raises(ValueError):
            alignment_cost(X, X, [(0, 0), (2, 0), (1, 1), (2, 2)], w)
        with pytest.raises(ValueError):
            alignment_cost(X, X, [(0, 0), (2, 2), (2, 2)], w)
        with pytest.raises(ValueError):
            alignment_cost(X, X, [(0, 0)], w)

    def test_matches_expansion_walk(self):
        rng = np.random.default_rng(13)
        for _ in range(60):
            sigma, den = 4, 2
            t = random_table(rng, sigma, den)
            X = random_string(rng, int(rng.integers(0, 12)), sigma)
            script = random_script(rng, X, sigma, 4)
            Y = script.apply(X)
            bps = script.to_breakpoints(len(X))
            # expansion oracle: walk every edge explicitly
            cost = 0
            for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
                while (x0, y0) != (x1, y1):
                    gx, gy = x1 - x0, y1 - y0
                    if gx == gy:
                        cost += int(t.cells[X[x0], Y[y0]])
                        x0, y0 = x0 + 1, y0 + 1
                    elif gx > gy:
                        cost += int(t.cells[X[x0], t.eps])
                        x0 += 1
                    else:
                        cost += int(t.cells[t.eps, Y[y0]])
                        y0 += 1
            assert alignment_cost(X, Y, bps, t) == cost

    def test_cost_lower_bound_per_breakpoint(self):
        rng = np.random.default_rng(17)
        t = random_table(rng, 3, 3)
        for _ in range(40):
            X = random_string(rng, int(rng.integers(1, 12)), 3)
            script = random_script(rng, X, 3, 4)
            Y = script.apply(X)
            bps = script.to_breakpoints(len(X))
            cost = alignment_cost(X, Y, bps, t)
            assert cost >= t.den * len(script)
            if cost == 0:
                assert list(X) == list(Y)

    def test_compress_drops_match_interior_pairs(self):
        X = symbols([0, 1, 2, 3])
        padded = [(0, 0), (1, 1), (2, 2), (4, 4)]
        assert compress_breakpoints(X, X, padded) == [(0, 0), (4, 4)]
