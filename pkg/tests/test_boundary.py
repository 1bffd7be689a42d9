import numpy as np
import pytest

from dynwed.boundary import (
    build_boundary_tree,
    dyadic_fragment_params,
    split_simple,
)
from dynwed.core import WeightTable, symbols
from dynwed.dp_oracle import AugGridSpec, brute_boundary_matrix, walk_path_cost
from dynwed.monge import is_monge

from util import random_string, random_table


def rand_case(rng, max_side=10):
    sigma = int(rng.integers(2, 5))
    w = random_table(rng, sigma, int(rng.integers(1, 3))).cap(6)
    X = random_string(rng, int(rng.integers(1, max_side + 1)), sigma)
    Y = random_string(rng, int(rng.integers(1, max_side + 1)), sigma)
    return X, Y, w


class TestBuild:
    def test_one_by_one_unit(self):
        w = WeightTable.unit(2)
        t = build_boundary_tree(symbols([0]), symbols([0]), w, W=1)
        assert t.bm.tolist() == [[0, 1, 3], [1, 0, 1], [3, 1, 0]]

    def test_corner_to_corner_on_equal_strings(self):
        w = WeightTable.unit(3)
        X = symbols([0, 1, 2, 0, 1])
        t = build_boundary_tree(X, X, w)
        # input |Y| is (0,0); output |X| is (|X|,|Y|)
        assert t.bm_entry(len(X), len(X)) == 0

    def test_empty_string_rejected(self):
        with pytest.raises(ValueError):
            build_boundary_tree(symbols([]), symbols([0]), WeightTable.unit(2))

    def test_matches_brute_on_random_rectangles(self):
        rng = np.random.default_rng(101)
        for _ in range(60):
            X, Y, w = rand_case(rng, max_side=12)
            tree = build_boundary_tree(X, Y, w)
            brute = brute_boundary_matrix(AugGridSpec(X, Y, w))
            assert (tree.bm == brute).all()

    def test_every_node_bm_is_exact_and_monge(self):
        rng = np.random.default_rng(103)
        for _ in range(15):
            X, Y, w = rand_case(rng, max_side=9)
            tree = build_boundary_tree(X, Y, w)
            for node in tree.iter_nodes():
                sub = AugGridSpec(X[node.x0 : node.x1], Y[node.y0 : node.y1], w, W=tree.W)
                assert (node.bm == brute_boundary_matrix(sub)).all()
                assert is_monge(node.bm)

    def test_merge_separator_property(self):
        # parent distance for cross pairs equals min over separator vertices
        rng = np.random.default_rng(107)
        for _ in range(10):
            X, Y, w = rand_case(rng, max_side=7)
            tree = build_boundary_tree(X, Y, w)
            for node in tree.iter_nodes():
                if node.axis != "x":
                    continue
                A, B = node.a.bm, node.b.bm
                h, wl = node.h, node.split - node.x0
                for i in range(h + wl + 1):
                    for j in range(wl + 1, node.w + h + 1):
                        want = min(
                            int(A[i, wl + s]) + int(B[s, j - wl]) for s in range(h + 1)
                        )
                        assert node.bm[i, j] == want

    def test_larger_leaf_threshold_same_result(self):
        rng = np.random.default_rng(109)
        X, Y, w = rand_case(rng, max_side=12)
        t1 = build_boundary_tree(X, Y, w, leaf_side=2)
        t2 = build_boundary_tree(X, Y, w, leaf_side=6)
        assert (t1.bm == t2.bm).all()


class TestEntryAndSubmatrix:
    def test_same_vertex_zero(self):
        rng = np.random.default_rng(113)
        X, Y, w = rand_case(rng)
        t = build_boundary_tree(X, Y, w)
        assert t.bm_entry(0, 0) == 0

    def test_one_by_one_anti_entry(self):
        w = WeightTable.unit(2)
        t = build_boundary_tree(symbols([0]), symbols([0]), w, W=1)
        assert t.bm_entry(0, 2) == 3

    def test_out_of_range(self):
        w = WeightTable.unit(2)
        t = build_boundary_tree(symbols([0]), symbols([0]), w)
        with pytest.raises(IndexError):
            t.bm_entry(3, 0)

    def test_submatrix_blocks(self):
        rng = np.random.default_rng(127)
        X, Y, w = rand_case(rng)
        t = build_boundary_tree(X, Y, w)
        full = t.submatrix(slice(0, t.size), slice(0, t.size))
        assert (full == t.bm).all()
        row = t.submatrix(slice(2, 3), slice(0, t.size))
        assert row.shape == (1, t.size)
        rng2 = np.random.default_rng(1)
        for _ in range(20):
            a, b = sorted(rng2.integers(0, t.size + 1, size=2))
            c, d = sorted(rng2.integers(0, t.size + 1, size=2))
            if a == b or c == d:
                continue
            blk = t.submatrix(slice(a, b), slice(c, d))
            assert is_monge(blk)
            assert (blk == t.bm[a:b, c:d]).all()


class TestPaths:
    def test_trivial(self):
        rng = np.random.default_rng(131)
        X, Y, w = rand_case(rng)
        t = build_boundary_tree(X, Y, w)
        assert t.reconstruct_path(0, 0) == [(0, len(Y))]

    def test_all_match_diagonal(self):
        w = WeightTable.unit(2)
        X = symbols([0, 1])
        t = build_boundary_tree(X, X, w)
        path = t.reconstruct_path(2, 2)  # (0,0) -> (2,2)
        assert path[0] == (0, 0) and path[-1] == (2, 2)
        spec = AugGridSpec(X, X, w, W=t.W)
        assert walk_path_cost(spec, path) == 0

    def test_all_pairs_costs_match_entries(self):
        rng = np.random.default_rng(137)
        for _ in range(12):
            X, Y, w = rand_case(rng, max_side=8)
            t = build_boundary_tree(X, Y, w)
            spec = AugGridSpec(X, Y, w, W=t.W)
            for i in range(t.size):
                for j in range(t.size):
                    path = t.reconstruct_path(i, j)
                    assert path[0] == t.input_vertex(i)
                    assert path[-1] == t.output_vertex(j)
                    assert walk_path_cost(spec, path) == t.bm_entry(i, j)


class TestDyadicParams:
    def test_examples(self):
        assert dyadic_fragment_params(4, 8) == (2, 0, 8)
        assert dyadic_fragment_params(0, 8) == (3, 0, 8)
        assert dyadic_fragment_params(3, 8) == (0, 2, 4)

    def test_split_examples(self):
        assert split_simple(3, 7, 8) == 4
        assert split_simple(0, 8, 8) == 0
        assert split_simple(5, 6, 8) in (5, 6)

    def test_halves_are_simple(self):
        rng = np.random.default_rng(139)
        for _ in range(200):
            ylen = int(rng.integers(1, 100))
            i = int(rng.integers(0, ylen))
            j = int(rng.integers(i + 1, ylen + 1))
            c = split_simple(i, j, ylen)
            assert i <= c <= j

            def simple(a, b):
                if a == b:
                    return True
                _, _, ra = dyadic_fragment_params(a, ylen)
                _, lb, _ = dyadic_fragment_params(b, ylen)
                return b <= ra or a >= lb

            assert simple(i, c) and simple(c, j)
