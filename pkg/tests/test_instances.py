from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bmep.instances import (
    InputGraph,
    all_ones,
    cycle_metric,
    ensure_two_disjoint_triangles,
    metric_lift,
    random_metric,
    reduction_from_graph,
    star_metric,
    witness_tree,
)
from bmep.model import ValueMode, is_metric, new_matrix
from bmep.objective import evaluate
from helpers import as_frac, random_01_matrix, random_cubic_tree

K3 = InputGraph(3, [(1, 2), (2, 3), (1, 3)])
C5 = InputGraph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
PETERSEN = InputGraph(
    10,
    [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
    + [(i, i + 5) for i in range(1, 6)]
    + [(6, 8), (8, 10), (10, 7), (7, 9), (9, 6)],
)


class TestMatrixFamilies:
    def test_all_ones(self):
        m = all_ones(4)
        assert m.rows == ((0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0))
        assert is_metric(m)

    def test_star_metric_entries(self):
        m = star_metric(5)
        assert all(m[1, j] == 1 for j in range(2, 6))
        assert all(m[i, j] == 2 for i in range(2, 6) for j in range(2, 6) if i != j)
        assert is_metric(m)

    def test_cycle_metric_entries(self):
        m = cycle_metric(6)
        assert m[1, 2] == 1 and m[1, 4] == 3 and m[1, 6] == 1 and m[2, 5] == 3
        assert is_metric(m)

    def test_random_metric_is_a_deterministic_metric(self):
        a = random_metric(7, seed=123)
        b = random_metric(7, seed=123)
        c = random_metric(7, seed=124)
        assert a == b
        assert a != c
        assert is_metric(a)
        assert a.is_integer_valued

    def test_metric_lift_adds_one_off_diagonal(self):
        m = new_matrix(4, [0, 1, 1, 0, 1, 0])
        lifted = metric_lift(m)
        assert all(
            lifted[i, j] == m[i, j] + 1
            for i in range(1, 5)
            for j in range(1, 5)
            if i != j
        )
        assert all(lifted[i, i] == 0 for i in range(1, 5))
        assert is_metric(lifted)

    def test_metric_lift_rejects_other_entries(self):
        with pytest.raises(ValueError, match="0/1"):
            metric_lift(new_matrix(3, [2, 1, 0]))


class TestInputGraph:
    def test_normalizes_and_validates(self):
        g = InputGraph(4, [(2, 1), (1, 2), (3, 4)])
        assert g.m == 2
        assert g.has_edge(1, 2) and g.has_edge(2, 1)
        assert not g.has_edge(1, 3)
        with pytest.raises(ValueError):
            InputGraph(3, [(1, 1)])
        with pytest.raises(ValueError):
            InputGraph(3, [(1, 4)])

    def test_triangles(self):
        assert K3.triangles() == ((1, 2, 3),)
        assert C5.triangles() == ()
        assert PETERSEN.triangles() == ()  # girth 5

    def test_padding_adds_only_missing_triangles(self):
        two = InputGraph(
            6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]
        )
        assert ensure_two_disjoint_triangles(two) == two

        one = ensure_two_disjoint_triangles(K3)
        assert one.p == 6 and one.m == 6

        none = ensure_two_disjoint_triangles(C5)
        assert none.p == 11 and none.m == 11

        # two triangles sharing a vertex only count once
        shared = InputGraph(
            5, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)]
        )
        padded = ensure_two_disjoint_triangles(shared)
        assert padded.p == 8 and padded.m == 9


class TestReduction:
    def test_known_sizes(self):
        for graph, p, k in ((K3, 6, 31), (C5, 11, 55), (PETERSEN, 16, 82)):
            red = reduction_from_graph(graph, 0.6)
            assert (red.p, red.k, red.n) == (p, k, p + k)
            assert red.k % 3 == 1
            # minimality of k under the growth bound
            bound = Fraction(red.p) / (2 * red.lam - 1)
            assert red.k >= bound
            assert red.k - 3 < bound

    def test_matrix_is_the_adjacency_indicator(self):
        red = reduction_from_graph(K3, 0.6)
        m = red.matrix
        assert m.n == red.n
        ones = sum(m.rows[i][j] for i in range(m.n) for j in range(m.n))
        assert ones == 2 * red.m
        for u, v in red.graph.edges:
            assert m[u, v] == 1

    def test_threshold_arithmetic_k3(self):
        red = reduction_from_graph(K3, 0.6)
        assert red.m == 6
        assert red.threshold_yes == Fraction(6, 2**20)  # 6 * 2^(2-22)
        assert red.log2_threshold_no == Fraction(2) - Fraction(3, 5) * 31
        assert red.lam == Fraction(3, 5)

    def test_lambda_forms_agree(self):
        assert reduction_from_graph(K3, 0.6).k == reduction_from_graph(K3, Fraction(3, 5)).k

    def test_lambda_bounds(self):
        for bad in (0.5, 2 / 3, 0.7, 0.2):
            with pytest.raises(ValueError, match="lam"):
                reduction_from_graph(K3, bad)

    def test_gap_is_nonempty_when_size_condition_holds(self):
        red = reduction_from_graph(InputGraph(30, []), 0.51)
        assert red.size_condition_met
        # threshold_no > threshold_yes, exactly: 2^q > m with q in log domain
        q = Fraction(2 * red.k + 4, 3) - red.lam * red.k
        a, b = q.numerator, q.denominator
        assert Fraction(2) ** a > Fraction(red.m) ** b
        assert red.gap_certified()
        assert red.log2_threshold_no > red.log2_threshold_yes

    def test_dense_fixtures_fail_the_size_condition(self):
        for graph in (K3, C5, PETERSEN):
            red = reduction_from_graph(graph, 0.6)
            assert not red.size_condition_met

    @given(
        st.integers(min_value=0, max_value=15),
        st.fractions(
            min_value=Fraction(55, 100), max_value=Fraction(65, 100), max_denominator=20
        ),
    )
    @settings(max_examples=15)
    def test_structural_invariants(self, extra, lam):
        graph = InputGraph(3 + extra, [(1, 2), (2, 3), (1, 3)])
        red = reduction_from_graph(graph, lam)
        assert red.k % 3 == 1
        assert red.k >= Fraction(red.p) / (2 * red.lam - 1)
        assert red.n == red.p + red.k
        assert (2 * red.k + 4) % 3 == 0
        if red.size_condition_met:
            assert red.log2_threshold_no > red.log2_threshold_yes


def path_coloring(p: int) -> dict:
    # proper for any padded graph whose original part has no edges
    colors = {}
    for v in range(1, p + 1):
        colors[v] = (v - 1) % 3 + 1
    return colors


class TestWitnessTree:
    def test_small_two_triangle_fixture(self):
        graph = InputGraph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        coloring = {1: 1, 2: 2, 3: 3, 4: 1, 5: 2, 6: 3}
        k = 7
        tree = witness_tree(graph, coloring, k)
        assert tree.n_leaves == 6 + k
        assert tree.is_cubic()
        d = tree.leaf_distances()
        bound = (2 * k + 4) // 3  # = 6
        for u, v in graph.edges:
            assert d[u - 1][v - 1] >= bound
        red_like = new_matrix(
            13,
            [
                [1 if graph.has_edge(i, j) else 0 for j in range(1, 14)]
                for i in range(1, 14)
            ],
        )
        cost = evaluate(tree, red_like, ValueMode.EXACT).value
        assert as_frac(cost) <= Fraction(6, 2 ** (bound - 2))

    def test_monochromatic_edge_is_named(self):
        with pytest.raises(ValueError, match=r"\(1, 2\)"):
            witness_tree(K3, {1: 1, 2: 1, 3: 2}, 7)

    def test_rejects_bad_colors_and_small_classes(self):
        graph = InputGraph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        with pytest.raises(ValueError, match="colors"):
            witness_tree(graph, {v: 4 for v in range(1, 7)}, 7)
        with pytest.raises(ValueError, match="fewer than 2"):
            witness_tree(
                InputGraph(4, [(1, 2)]), {1: 1, 2: 2, 3: 1, 4: 2}, 7
            )

    def test_rejects_bad_k(self):
        graph = InputGraph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        coloring = {1: 1, 2: 2, 3: 3, 4: 1, 5: 2, 6: 3}
        with pytest.raises(ValueError, match="modulo 3"):
            witness_tree(graph, coloring, 9)
        with pytest.raises(ValueError, match="at least 4"):
            witness_tree(graph, coloring, 1)

    def test_leaf_count_scales_with_k(self):
        graph = InputGraph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        coloring = {1: 1, 2: 2, 3: 3, 4: 1, 5: 2, 6: 3}
        for k in (7, 13, 31):
            tree = witness_tree(graph, coloring, k)
            assert tree.n_leaves == 6 + k
            assert tree.is_cubic()


class TestMetricLiftInvariance:
    @given(st.integers(min_value=4, max_value=9), st.randoms(use_true_random=False))
    @settings(max_examples=25)
    def test_lift_shifts_objective_by_n(self, n, rng):
        tree = random_cubic_tree(n, rng)
        matrix = random_01_matrix(n, rng)
        base = as_frac(evaluate(tree, matrix, ValueMode.EXACT).value)
        lifted = as_frac(evaluate(tree, metric_lift(matrix), ValueMode.EXACT).value)
        assert lifted == base + n
