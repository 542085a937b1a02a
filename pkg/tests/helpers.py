"""Shared generators and independent reference implementations.

The reference routines recompute quantities by a different route than the
package does (explicit vertex paths instead of subtree recursions, brute
permutations instead of dynamic programming, arc contiguity instead of
face walks), so each test compares two independent derivations.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from bmep.model import DissimilarityMatrix, LeafTree, new_matrix


def as_frac(x) -> Fraction:
    """Exact value of an int, Fraction, or DyadicRational."""
    return x.as_fraction() if hasattr(x, "as_fraction") else Fraction(x)


def random_cubic_tree(n: int, rng: random.Random) -> LeafTree:
    """Uniform-ish cubic tree grown by splitting a random edge per new leaf."""
    assert n >= 3
    # leaves are vertices 0..n-1 carrying species v+1; internals start at n
    edges = [(0, n), (1, n), (2, n)]
    nxt = n + 1
    for leaf in range(3, n):
        a, b = edges.pop(rng.randrange(len(edges)))
        w = nxt
        nxt += 1
        edges.extend([(a, w), (w, b), (leaf, w)])
    return LeafTree(edges, {v: v + 1 for v in range(n)})


def contract_internal_edge(tree: LeafTree, u: int, v: int) -> LeafTree:
    """Merge internal vertex v into u (both endpoints must be internal)."""
    assert not tree.is_leaf(u) and not tree.is_leaf(v)
    edges = []
    for a, b in tree.edges:
        a2 = u if a == v else a
        b2 = u if b == v else b
        if a2 != b2:
            edges.append((a2, b2))
    return LeafTree(edges, {w: tree.species_of(w) for w in tree.leaves})


def random_tree(n: int, rng: random.Random, contractions: int | None = None) -> LeafTree:
    """Leaf tree with arbitrary internal degrees >= 3."""
    tree = random_cubic_tree(n, rng)
    limit = len(tree.internal_vertices) - 1
    if contractions is None:
        contractions = rng.randint(0, limit)
    for _ in range(min(contractions, limit)):
        internal = set(tree.internal_vertices)
        candidates = [(a, b) for a, b in tree.edges if a in internal and b in internal]
        if not candidates:
            break
        a, b = candidates[rng.randrange(len(candidates))]
        tree = contract_internal_edge(tree, a, b)
    return tree


def tree_with_degree(n: int, q: int, rng: random.Random) -> tuple:
    """(tree, hub) where hub is a vertex of degree exactly q."""
    assert 3 <= q <= n
    while True:
        tree = random_cubic_tree(n, rng)
        internal = list(tree.internal_vertices)
        hub = internal[rng.randrange(len(internal))]
        while tree.degree(hub) < q:
            others = {v for v in tree.internal_vertices if v != hub}
            near = [b for a, b in tree.edges if a == hub and b in others]
            near += [a for a, b in tree.edges if b == hub and a in others]
            if not near:
                break
            tree = contract_internal_edge(tree, hub, near[rng.randrange(len(near))])
        if tree.degree(hub) == q:
            return tree, hub


def path_pi(tree: LeafTree) -> dict:
    """Reference topological weights via explicit vertex paths.

    pi[(i, j)] = 2 * prod over internal vertices u on the i-j path of
    1 / (deg(u) - 1), as exact Fractions, computed from BFS parent chains.
    """
    parent_maps = {}
    for leaf in tree.leaves:
        parents = {leaf: None}
        stack = [leaf]
        while stack:
            x = stack.pop()
            for y in tree.neighbors(x):
                if y not in parents:
                    parents[y] = x
                    stack.append(y)
        parent_maps[leaf] = parents
    out = {}
    for a, b in itertools.combinations(tree.leaves, 2):
        path = [b]
        while path[-1] != a:
            path.append(parent_maps[a][path[-1]])
        value = Fraction(2)
        for v in path[1:-1]:
            value /= tree.degree(v) - 1
        i, j = sorted((tree.species_of(a), tree.species_of(b)))
        out[(i, j)] = value
    return out


def brute_objective(tree: LeafTree, matrix: DissimilarityMatrix) -> Fraction:
    pi = path_pi(tree)
    return sum(
        (Fraction(matrix[i, j]) * pi[(i, j)] for (i, j) in pi),
        start=Fraction(0),
    )


def brute_tsp(matrix: DissimilarityMatrix):
    """Cheapest hamiltonian cycle by trying all (n-1)!/2 tours."""
    n = matrix.n
    best = None
    best_tour = None
    for perm in itertools.permutations(range(2, n + 1)):
        if perm[0] > perm[-1]:
            continue  # each cycle once, orientation fixed
        tour = (1,) + perm
        cost = sum(matrix[tour[t], tour[(t + 1) % n]] for t in range(n))
        if best is None or cost < best:
            best, best_tour = cost, tour
    return best, best_tour


def tour_is_compatible(tour, tree: LeafTree) -> bool:
    """Arc-contiguity test: every edge split of the leaves must occupy a
    contiguous arc of the cyclic tour (exactly two boundary positions)."""
    order = list(tour)
    n = len(order)
    if sorted(order) != sorted(tree.species_of(v) for v in tree.leaves):
        return False
    for a, b in tree.edges:
        side = _species_beyond(tree, a, b)
        boundaries = sum(
            (order[t] in side) != (order[(t + 1) % n] in side) for t in range(n)
        )
        if boundaries != 2:
            return False
    return True


def _species_beyond(tree: LeafTree, a: int, b: int) -> set:
    """Species of leaves on b's side of edge (a, b)."""
    seen = {a, b}
    stack = [b]
    species = set()
    while stack:
        x = stack.pop()
        if tree.is_leaf(x):
            species.add(tree.species_of(x))
        for y in tree.neighbors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return species


def random_int_matrix(n: int, rng: random.Random, lo: int = 0, hi: int = 20):
    entries = [rng.randint(lo, hi) for _ in range(n * (n - 1) // 2)]
    return new_matrix(n, entries)


def random_01_matrix(n: int, rng: random.Random):
    return new_matrix(n, [rng.randint(0, 1) for _ in range(n * (n - 1) // 2)])


def shifted(matrix: DissimilarityMatrix, delta: int) -> DissimilarityMatrix:
    n = matrix.n
    rows = [
        [0 if i == j else matrix[i + 1, j + 1] + delta for j in range(n)]
        for i in range(n)
    ]
    return DissimilarityMatrix(rows)
