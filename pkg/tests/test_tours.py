from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bmep.instances import star_metric
from bmep.model import LeafTree, ValueMode, new_matrix
from bmep.objective import evaluate
from bmep.tours import (
    Embedding,
    Tour,
    embed_and_read_tour,
    embedding_count,
    enumerate_compatible_tours,
    mst_cost,
    sample_compatible_tour,
    tour_cost,
    tsp_exact,
)
from helpers import (
    as_frac,
    brute_tsp,
    random_cubic_tree,
    random_int_matrix,
    random_tree,
    tour_is_compatible,
)
from test_model import caterpillar


class TestTour:
    def test_canonical_rotation_starts_at_one(self):
        assert Tour.from_sequence((3, 1, 2)).order == (1, 2, 3)
        assert Tour.from_sequence((2, 3, 1)).order == (1, 2, 3)

    def test_canonical_orientation(self):
        # the neighbor after 1 is the smaller of the two around it
        assert Tour.from_sequence((1, 3, 2)).order == (1, 2, 3)
        assert Tour.from_sequence((1, 4, 3, 2)).order == (1, 2, 3, 4)
        assert Tour.from_sequence((4, 3, 1, 2)).order == (1, 2, 4, 3)

    def test_rejects_bad_sequences(self):
        with pytest.raises(ValueError):
            Tour.from_sequence((1, 2, 2))
        with pytest.raises(ValueError):
            Tour.from_sequence((1, 3, 4))

    def test_cost_wraps_around(self):
        m = new_matrix(3, [5, 7, 11])  # d(2,1)=5 d(3,1)=7 d(3,2)=11
        assert tour_cost(Tour.from_sequence((1, 2, 3)), m) == 5 + 11 + 7


class TestEmbeddings:
    def test_identity_embedding_of_caterpillar(self):
        # rotations in sorted-neighbor order; walk the single face
        tree = caterpillar(5)
        rotations = {v: tree.neighbors(v) for v in tree.internal_vertices}
        tour = embed_and_read_tour(tree, Embedding(rotations))
        assert tour.order == (1, 2, 4, 5, 3)

    def test_three_star_embeddings_read_the_same_tour(self):
        # two cyclic orders around the center, mirror images of each other
        tree = LeafTree([(0, 3), (1, 3), (2, 3)], {0: 1, 1: 2, 2: 3})
        assert embedding_count(tree) == 2
        tours = enumerate_compatible_tours(tree)
        assert [t.order for t in tours] == [(1, 2, 3), (1, 2, 3)]

    def test_incomplete_embedding_rejected(self):
        tree = caterpillar(5)
        rotations = {v: tree.neighbors(v) for v in list(tree.internal_vertices)[:-1]}
        with pytest.raises(ValueError, match="embedding"):
            embed_and_read_tour(tree, Embedding(rotations))

    @given(st.integers(min_value=3, max_value=8), st.randoms(use_true_random=False))
    def test_embedding_count_is_product_of_factorials(self, n, rng):
        tree = random_tree(n, rng)
        want = math.prod(
            math.factorial(tree.degree(v) - 1) for v in tree.internal_vertices
        )
        assert embedding_count(tree) == want
        assert len(enumerate_compatible_tours(tree)) == want

    def test_enumeration_cap(self):
        rng = random.Random(0)
        tree = random_cubic_tree(30, rng)
        with pytest.raises(ValueError, match="cap"):
            enumerate_compatible_tours(tree, cap=1000)


class TestCompatibility:
    @given(
        st.integers(min_value=3, max_value=9),
        st.integers(min_value=0, max_value=10**6),
        st.randoms(use_true_random=False),
    )
    def test_sampled_tours_are_compatible(self, n, seed, rng):
        tree = random_tree(n, rng)
        tour = sample_compatible_tour(tree, seed)
        assert tour_is_compatible(tour.order, tree)

    @given(st.integers(min_value=4, max_value=7), st.randoms(use_true_random=False))
    def test_enumerated_tours_are_exactly_the_compatible_ones(self, n, rng):
        tree = random_cubic_tree(n, rng)
        enumerated = {t.order for t in enumerate_compatible_tours(tree)}
        rest = (
            Tour.from_sequence((1,) + p).order
            for p in itertools.permutations(range(2, n + 1))
        )
        compatible = {s for s in rest if tour_is_compatible(s, tree)}
        assert enumerated == compatible

    def test_sampling_is_deterministic_per_seed(self):
        tree = caterpillar(6)
        assert sample_compatible_tour(tree, 42) == sample_compatible_tour(tree, 42)


class TestMeanTourCost:
    @given(st.integers(min_value=3, max_value=7), st.randoms(use_true_random=False))
    def test_mean_over_embeddings_equals_objective(self, n, rng):
        tree = random_tree(n, rng)
        matrix = random_int_matrix(n, rng)
        tours = enumerate_compatible_tours(tree)
        mean = Fraction(sum(tour_cost(t, matrix) for t in tours), len(tours))
        assert mean == as_frac(evaluate(tree, matrix, ValueMode.EXACT).value)


class TestTsp:
    def test_star_metric_cycle(self):
        cost, tour = tsp_exact(star_metric(5))
        # every return to the hub costs 2, all other hops cost 2 as well,
        # except the two hops adjacent to species 1
        assert cost == 8
        assert tour_cost(tour, star_metric(5)) == 8

    @given(st.integers(min_value=3, max_value=7), st.randoms(use_true_random=False))
    def test_matches_brute_force(self, n, rng):
        matrix = random_int_matrix(n, rng, lo=1, hi=30)
        cost, tour = tsp_exact(matrix)
        want, _ = brute_tsp(matrix)
        assert cost == want
        assert tour_cost(tour, matrix) == cost

    def test_size_guard(self):
        rng = random.Random(7)
        with pytest.raises(ValueError, match="18"):
            tsp_exact(random_int_matrix(19, rng))


def test_mst_cost_matches_networkx():
    nx = pytest.importorskip("networkx")
    rng = random.Random(9)
    for n in (4, 6, 9):
        matrix = random_int_matrix(n, rng, lo=1, hi=40)
        g = nx.Graph()
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                g.add_edge(i, j, weight=matrix[i, j])
        want = sum(d["weight"] for _, _, d in nx.minimum_spanning_edges(g, data=True))
        assert mst_cost(matrix) == want
