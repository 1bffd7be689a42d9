import numpy as np
import pytest

from dynwed.core import (
    DEL,
    INF,
    INS,
    SUB,
    Edit,
    EditScript,
    WeightTable,
    alignment_cost,
    symbols,
)
from dynwed.dp_oracle import AugGridSpec, brute_boundary_matrix, ed_bounded
from dynwed.dyn_wed import DynWed, DynWedMulti, partition_lengths
from dynwed.monge import is_monge, minplus

from util import random_script, random_string, random_table


def rand_edit(rng, n, sigma, cur):
    op = rng.random()
    if op < 0.34 and n > 0:
        pos = int(rng.integers(0, n))
        sym = (cur[pos] + 1 + int(rng.integers(0, sigma - 1))) % sigma
        return Edit(SUB, pos, sym)
    if op < 0.67 or n == 0:
        return Edit(INS, int(rng.integers(0, n + 1)), int(rng.integers(0, sigma)))
    return Edit(DEL, int(rng.integers(0, n)))


class TestPartitioning:
    def test_lengths_in_range(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            k = int(rng.integers(1, 20))
            total = int(rng.integers(k, 40 * k))
            lengths = partition_lengths(total, k)
            assert sum(lengths) == total
            assert all(k <= L < 2 * k for L in lengths)

    def test_expected_phrase_count(self):
        k = 7
        lengths = partition_lengths(10 * k, k)
        assert 5 <= len(lengths) <= 10


class TestInit:
    def test_empty_string_fallback(self):
        dw = DynWed(symbols([]), 2, WeightTable.unit(3))
        assert dw.fallback
        assert dw.query(EditScript([])) == (0, [(0, 0)])

    def test_partition_property_on_init(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            k = int(rng.integers(1, 7))
            n = int(rng.integers(k + 1, 12 * k))
            dw = DynWed(random_string(rng, n, 3), k, WeightTable.unit(3))
            dw.check_invariants()

    def test_d_matrices_match_brute_boundary_submatrix(self):
        rng = np.random.default_rng(2)
        for _ in range(8):
            k = int(rng.integers(1, 5))
            n = int(rng.integers(k + 1, 10 * k))
            sigma = 3
            w = random_table(rng, sigma, int(rng.integers(1, 3)))
            X = random_string(rng, n, sigma)
            dw = DynWed(X, k, w)
            if dw.fallback:
                continue
            for i, box in enumerate(dw.boxes):
                x0, x1 = dw.cuts[i], dw.cuts[i + 1]
                wy0, wy1 = dw._window(i)
                spec = AugGridSpec(X[x0:x1], X[wy0:wy1], dw.w, W=dw.W)
                bm = brute_boundary_matrix(spec)
                vin_lo, vin_hi = dw._vrange(i)
                vout_lo, vout_hi = dw._vrange(i + 1)
                rows = slice(wy1 - vin_hi, wy1 - vin_lo + 1)
                cols = slice((x1 - x0) + (wy1 - vout_hi), (x1 - x0) + (wy1 - vout_lo) + 1)
                assert (box.d_mat == bm[rows, cols]).all()
                assert is_monge(box.d_mat)

    def test_chain_product_associativity(self):
        # D_{a,c} = D_{a,b} (x) D_{b,c} for stored matrices
        rng = np.random.default_rng(3)
        w = random_table(rng, 3, 2)
        X = random_string(rng, 30, 3)
        dw = DynWed(X, 3, w)
        mats = [b.d_mat for b in dw.boxes]
        m = len(mats)
        for a in range(m):
            for c in range(a + 2, m + 1):
                full = mats[a]
                for j in range(a + 1, c):
                    full = minplus(full, mats[j])
                for b in range(a + 1, c):
                    left = mats[a]
                    for j in range(a + 1, b):
                        left = minplus(left, mats[j])
                    right = mats[b]
                    for j in range(b + 1, c):
                        right = minplus(right, mats[j])
                    assert (minplus(left, right) == full).all()


class TestQuery:
    def test_empty_script_identity(self):
        rng = np.random.default_rng(4)
        X = random_string(rng, 20, 3)
        dw = DynWed(X, 2, WeightTable.unit(3))
        assert dw.query(EditScript([])) == (0, [(0, 0), (20, 20)])

    def test_single_substitution_weighted(self):
        cells = np.array([[0, 3, 4], [3, 0, 4], [4, 4, 0]])
        w = WeightTable(2, 2, cells)
        X = symbols([0, 0, 0, 0])
        dw = DynWed(X, 2, w)
        val, bps = dw.query(EditScript([Edit(SUB, 0, 1)]))
        assert val == 3  # 1.5 units <= k = 2
        assert alignment_cost(X, symbols([1, 0, 0, 0]), bps, w) == 3

    def test_query_matches_oracle_randomized(self):
        rng = np.random.default_rng(5)
        for trial in range(120):
            sigma = int(rng.integers(2, 5))
            den = int(rng.integers(1, 4))
            k = int(rng.integers(1, 7))
            n = int(rng.integers(0, 60))
            w = random_table(rng, sigma, den)
            X = random_string(rng, n, sigma)
            dw = DynWed(X, k, w)
            script = random_script(rng, X, sigma, min(k, 4))
            Zs = script.apply(X)
            want, _ = ed_bounded(X, Zs, k, w)
            got, bps = dw.query(script)
            assert got == want, f"trial {trial}: got {got} want {want}"
            if got is not INF:
                assert alignment_cost(X, Zs, bps, w) == got

    def test_script_too_long_rejected(self):
        rng = np.random.default_rng(6)
        X = random_string(rng, 30, 3)
        dw = DynWed(X, 2, WeightTable.unit(3))
        with pytest.raises(ValueError):
            dw.query(EditScript([Edit(DEL, 0), Edit(DEL, 1), Edit(DEL, 2)]))

    def test_non_canonical_script_rejected(self):
        X = symbols([1, 1, 1, 1, 1, 1])
        dw = DynWed(X, 2, WeightTable.unit(3))
        with pytest.raises(ValueError):
            dw.query(EditScript([Edit(SUB, 0, 1)]))  # no-op substitution


class TestEdits:
    def test_edit_then_identity_query(self):
        rng = np.random.default_rng(7)
        X = random_string(rng, 25, 3)
        dw = DynWed(X, 2, WeightTable.unit(3))
        dw.edit(Edit(SUB, 3, (int(X[3]) + 1) % 3))
        val, bps = dw.query(EditScript([]))
        assert val == 0

    def test_partition_invariant_after_random_edits(self):
        rng = np.random.default_rng(8)
        for trial in range(6):
            k = int(rng.integers(1, 5))
            cur = [int(v) for v in random_string(rng, int(rng.integers(0, 40)), 3)]
            dw = DynWed(symbols(cur), k, WeightTable.unit(3))
            for _ in range(100):
                e = rand_edit(rng, len(cur), 3, cur)
                dw.edit(e)
                if e.kind == INS:
                    cur.insert(e.pos, e.sym)
                elif e.kind == DEL:
                    cur.pop(e.pos)
                else:
                    cur[e.pos] = e.sym
                assert dw.X == cur
                dw.check_invariants()

    def test_edits_then_queries_match_oracle(self):
        rng = np.random.default_rng(9)
        for trial in range(15):
            sigma = 4
            den = int(rng.integers(1, 3))
            k = int(rng.integers(1, 6))
            w = random_table(rng, sigma, den)
            cur = [int(v) for v in random_string(rng, int(rng.integers(0, 50)), sigma)]
            dw = DynWed(symbols(cur), k, w)
            for _ in range(30):
                e = rand_edit(rng, len(cur), sigma, cur)
                dw.edit(e)
                if e.kind == INS:
                    cur.insert(e.pos, e.sym)
                elif e.kind == DEL:
                    cur.pop(e.pos)
                else:
                    cur[e.pos] = e.sym
                X = symbols(cur)
                script = random_script(rng, X, sigma, min(k, 3))
                Zs = script.apply(X)
                want, _ = ed_bounded(X, Zs, k, w)
                got, bps = dw.query(script)
                assert got == want
                if got is not INF:
                    assert alignment_cost(X, Zs, bps, w) == got


class TestMulti:
    def test_matches_single_and_oracle(self):
        rng = np.random.default_rng(10)
        for trial in range(25):
            sigma = 3
            k = int(rng.integers(1, 9))
            w = random_table(rng, sigma, int(rng.integers(1, 3)))
            cur = [int(v) for v in random_string(rng, int(rng.integers(0, 40)), sigma)]
            multi = DynWedMulti(symbols(cur), k, w)
            for _ in range(8):
                e = rand_edit(rng, len(cur), sigma, cur)
                multi.edit(e)
                if e.kind == INS:
                    cur.insert(e.pos, e.sym)
                elif e.kind == DEL:
                    cur.pop(e.pos)
                else:
                    cur[e.pos] = e.sym
                X = symbols(cur)
                script = random_script(rng, X, sigma, min(k, 3))
                Zs = script.apply(X)
                want, _ = ed_bounded(X, Zs, k, w)
                got, bps = multi.query(script)
                assert got == want
                if got is not INF:
                    assert alignment_cost(X, Zs, bps, w) == got

    def test_low_distance_answered_by_low_threshold(self):
        rng = np.random.default_rng(11)
        w = WeightTable.unit(3)
        X = random_string(rng, 200, 3)
        multi = DynWedMulti(X, 64, w)
        script = EditScript([Edit(SUB, 5, (int(X[5]) + 1) % 3)])
        val, _ = multi.query(script)
        assert val == 1
        assert all(t <= 4 for t in multi.queried)

    def test_empty_script_first_instance(self):
        rng = np.random.default_rng(12)
        X = random_string(rng, 30, 3)
        multi = DynWedMulti(X, 8, WeightTable.unit(3))
        assert multi.query(EditScript([]))[0] == 0
