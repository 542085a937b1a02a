"""Tours read off planar embeddings of a tree, plus classical tour bounds.

A planar embedding fixes a cyclic order of incident edges at every internal
vertex; walking the single face of the embedded tree visits each leaf once
and yields a tour over the species.  Averaged uniformly over all embeddings
(independent cyclic orders per vertex), the tour cost equals the tree
objective exactly, which is what makes sampled and enumerated tours useful
cross-checks.  ``tsp_exact`` and ``mst_cost`` provide the standard lower
bounds: spanning tree <= optimal tour <= optimal tree objective for metric
data.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .approx import minimum_spanning_tree
from .model import DissimilarityMatrix, LeafTree

#: Refuse to enumerate more embeddings than this by default.
DEFAULT_EMBEDDING_CAP = 10**6

#: Largest instance accepted by the exact tour solver.
TSP_MAX_N = 18


def _canonical_order(seq) -> tuple:
    order = tuple(int(s) for s in seq)
    n = len(order)
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("tour must visit each species 1..n exactly once")
    i = order.index(1)
    order = order[i:] + order[:i]
    if n >= 3 and order[-1] < order[1]:
        order = (order[0],) + tuple(reversed(order[1:]))
    return order


@dataclass(frozen=True)
class Tour:
    """Cyclic species order, canonicalized: starts at species 1 and runs
    toward the smaller of 1's two neighbors."""

    order: tuple

    @classmethod
    def from_sequence(cls, seq) -> "Tour":
        return cls(_canonical_order(seq))

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)


@dataclass(frozen=True)
class Embedding:
    """Cyclic order of neighbors around each internal vertex."""

    rotations: dict


def tour_cost(tour: Tour, matrix: DissimilarityMatrix):
    """Sum of dissimilarities along the cyclic tour, wraparound included."""
    order = tour.order
    n = matrix.n
    if len(order) != n:
        raise ValueError(f"tour visits {len(order)} species but matrix is {n}x{n}")
    rows = matrix.rows
    total = rows[order[-1] - 1][order[0] - 1]
    for a, b in zip(order, order[1:]):
        total += rows[a - 1][b - 1]
    return total


def _read_tour(tree: LeafTree, rotations: dict) -> Tour:
    """Walk the unique face of the embedded tree and record leaves in order."""
    start_leaf = tree.leaf_of(1)
    u, v = start_leaf, tree.neighbors(start_leaf)[0]
    start = (u, v)
    order = []
    while True:
        if tree.is_leaf(v):
            order.append(tree.species_of(v))
            nxt = (v, u)
        else:
            rot = rotations[v]
            i = rot.index(u)
            nxt = (v, rot[(i + 1) % len(rot)])
        if nxt == start:
            break
        u, v = nxt
    return Tour.from_sequence(order)


def embed_and_read_tour(tree: LeafTree, embedding: Embedding) -> Tour:
    """The species tour induced by the embedding's cyclic orders."""
    rotations = {}
    for v in tree.internal_vertices:
        if v not in embedding.rotations:
            raise ValueError(f"incomplete embedding: no cyclic order for vertex {v}")
        rot = tuple(embedding.rotations[v])
        if sorted(rot) != sorted(tree.neighbors(v)):
            raise ValueError(f"cyclic order at vertex {v} is not a permutation of its neighbors")
        rotations[v] = rot
    return _read_tour(tree, rotations)


def _rotation_choices(tree: LeafTree, v: int) -> list:
    # fixing the smallest neighbor first enumerates each cyclic order once
    nbrs = tree.neighbors(v)
    return [(nbrs[0],) + rest for rest in itertools.permutations(nbrs[1:])]


def embedding_count(tree: LeafTree) -> int:
    """Number of distinct embeddings: product of (deg - 1)! over internal vertices."""
    total = 1
    for v in tree.internal_vertices:
        total *= math.factorial(tree.degree(v) - 1)
    return total


def sample_compatible_tour(tree: LeafTree, seed: int) -> Tour:
    """Tour of one uniformly random embedding (deterministic in ``seed``)."""
    rng = random.Random(seed)
    rotations = {}
    for v in tree.internal_vertices:
        nbrs = tree.neighbors(v)
        rest = list(nbrs[1:])
        rng.shuffle(rest)
        rotations[v] = (nbrs[0],) + tuple(rest)
    return _read_tour(tree, rotations)


def enumerate_compatible_tours(tree: LeafTree, cap: int = DEFAULT_EMBEDDING_CAP) -> list:
    """Tours of all embeddings, one entry per embedding (repeats preserved).

    The uniform average of their costs equals the tree objective exactly.
    Raises when the embedding count exceeds ``cap``.
    """
    total = embedding_count(tree)
    if total > cap:
        raise ValueError(f"embedding count {total} exceeds cap {cap}")
    internals = tree.internal_vertices
    choices = [_rotation_choices(tree, v) for v in internals]
    tours = []
    for combo in itertools.product(*choices):
        tours.append(_read_tour(tree, dict(zip(internals, combo))))
    return tours


def tsp_exact(matrix: DissimilarityMatrix):
    """Minimum-cost closed tour by dynamic programming over subsets.

    Returns ``(cost, tour)``; exact arithmetic whenever the entries are
    exact.  Limited to ``n <= 18``.
    """
    n = matrix.n
    if n > TSP_MAX_N:
        raise ValueError(f"n={n} exceeds the exact tour limit of {TSP_MAX_N}")
    rows = matrix.rows
    m = n - 1  # species 2..n, bit j <-> species j + 2
    size = 1 << m
    dp = [[None] * m for _ in range(size)]
    back = [[-1] * m for _ in range(size)]
    for j in range(m):
        dp[1 << j][j] = rows[0][j + 1]
    for mask in range(1, size):
        row = dp[mask]
        for j in range(m):
            cur = row[j]
            if cur is None or not (mask >> j) & 1:
                continue
            rj = rows[j + 1]
            rest = ~mask & (size - 1)
            t = 0
            r = rest
            while r:
                if r & 1:
                    nm = mask | (1 << t)
                    cand = cur + rj[t + 1]
                    old = dp[nm][t]
                    if old is None or cand < old:
                        dp[nm][t] = cand
                        back[nm][t] = j
                r >>= 1
                t += 1
    full = size - 1
    best = None
    best_j = -1
    for j in range(m):
        cand = dp[full][j] + rows[j + 1][0]
        if best is None or cand < best:
            best = cand
            best_j = j
    path = []
    mask, j = full, best_j
    while j != -1:
        path.append(j + 2)
        pj = back[mask][j]
        mask &= ~(1 << j)
        j = pj
    path.append(1)
    path.reverse()
    return best, Tour.from_sequence(path)


def mst_cost(matrix: DissimilarityMatrix):
    """Weight of the deterministic minimum spanning tree on the species."""
    rows = matrix.rows
    return sum(rows[u - 1][v - 1] for u, v in minimum_spanning_tree(matrix))
