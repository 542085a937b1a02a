"""Instance generators: named metric families, random metrics, and hardness
instances built from graph 3-colorings together with their certificate trees.

The reduction takes a graph on ``p`` vertices (first padded so that it
contains two vertex-disjoint triangles), a parameter ``lam`` strictly
between 1/2 and 2/3, and the smallest ``k >= p / (2*lam - 1)`` with
``k = 1 (mod 3)``.  The instance is the 0/1 adjacency matrix embedded in
``n = p + k`` species.  If the graph is 3-colorable, a certificate tree
keeps every adjacent pair of species at leaf distance at least
``(2k + 4) / 3``, so the optimum is at most ``m * 2**(2 - (2k + 4) / 3)``;
if it is not, the optimum is at least ``2**(2 - lam * k)``.  When the edge
count satisfies ``m <= 2**((2/3 - lam) * p)`` these two thresholds are
separated by a factor of at least ``c**n`` with
``c = 2**((2/3 - lam) * (3 - 4*lam)) > 1``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .model import DissimilarityMatrix, LeafTree


@dataclass(frozen=True)
class InputGraph:
    """Simple undirected graph on vertices ``1..p``."""

    p: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.p and 1 <= v <= self.p):
                raise ValueError(f"edge ({u}, {v}) out of range 1..{self.p}")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def triangles(self) -> tuple:
        return tuple(
            (a, b, c)
            for a, b, c in itertools.combinations(range(1, self.p + 1), 3)
            if self.has_edge(a, b) and self.has_edge(a, c) and self.has_edge(b, c)
        )


def ensure_two_disjoint_triangles(graph: InputGraph) -> InputGraph:
    """Append fresh 3-vertex triangles until the graph contains two
    vertex-disjoint ones; graphs that already do are returned unchanged."""
    tris = graph.triangles()
    have = 0
    if tris:
        have = 1
        for t1, t2 in itertools.combinations(tris, 2):
            if not set(t1) & set(t2):
                have = 2
                break
    need = 2 - have
    if need == 0:
        return graph
    p = graph.p
    edges = set(graph.edges)
    for _ in range(need):
        a, b, c = p + 1, p + 2, p + 3
        edges.update([(a, b), (a, c), (b, c)])
        p += 3
    return InputGraph(p, frozenset(edges))


def all_ones(n: int) -> DissimilarityMatrix:
    """Every off-diagonal dissimilarity equal to 1; every cubic tree scores n."""
    return DissimilarityMatrix([[0 if i == j else 1 for j in range(n)] for i in range(n)])


def star_metric(n: int) -> DissimilarityMatrix:
    """Species 1 at distance 1 from everyone, all other pairs at distance 2.

    The spanning tree weighs ``n - 1`` while every cubic tree scores exactly
    ``2n - 2``, which makes the factor-2 guarantee of the spanning-tree
    approximation tight as ``n`` grows.
    """
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                rows[i][j] = 1 if (i == 0 or j == 0) else 2
    return DissimilarityMatrix(rows)


def cycle_metric(n: int) -> DissimilarityMatrix:
    """Shortest-path distances of the n-cycle 1-2-...-n-1."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = abs(i - j)
            rows[i][j] = min(d, n - d)
    return DissimilarityMatrix(rows)


def random_metric(n: int, seed: int) -> DissimilarityMatrix:
    """Manhattan distances between random integer points in ``[0, 100]**3``."""
    rng = random.Random(seed)
    pts = [(rng.randint(0, 100), rng.randint(0, 100), rng.randint(0, 100)) for _ in range(n)]
    rows = [
        [sum(abs(a - b) for a, b in zip(pts[i], pts[j])) for j in range(n)]
        for i in range(n)
    ]
    return DissimilarityMatrix(rows)


def metric_lift(matrix: DissimilarityMatrix) -> DissimilarityMatrix:
    """Add 1 to every off-diagonal entry of a 0/1 matrix.

    The result takes values in {1, 2} and satisfies the triangle
    inequality, while every tree objective shifts by exactly ``n``; in
    particular minimizers are preserved.
    """
    n = matrix.n
    rows = matrix.rows
    for i in range(n):
        for j in range(n):
            if i != j and rows[i][j] not in (0, 1):
                raise ValueError(f"entry ({i + 1}, {j + 1}) is {rows[i][j]}; lift needs a 0/1 matrix")
    return DissimilarityMatrix(
        [[0 if i == j else rows[i][j] + 1 for j in range(n)] for i in range(n)]
    )


def _pow2_at_least(exponent: Fraction, value: int) -> bool:
    """Exact test of ``2**exponent >= value`` for integer ``value >= 1``."""
    # bit-length bracket settles everything except a sub-unit window
    if exponent >= (value - 1).bit_length():
        return True
    floor_log = value.bit_length() - 1
    if exponent <= floor_log:
        return exponent == floor_log and value == 1 << floor_log
    a, b = exponent.numerator, exponent.denominator
    return Fraction(2) ** a >= Fraction(value) ** b


def _as_lambda(lam) -> Fraction:
    if isinstance(lam, float):
        lam = Fraction(str(lam))  # decimal semantics, e.g. 0.6 -> 3/5
    else:
        lam = Fraction(lam)
    if not Fraction(1, 2) < lam < Fraction(2, 3):
        raise ValueError("lam must lie strictly between 1/2 and 2/3")
    if lam.denominator > 1000:
        # keeps the exact power comparisons cheap; lam is a knob, not data
        raise ValueError("lam needs a denominator of at most 1000, e.g. 3/5 or 0.51")
    return lam


@dataclass(frozen=True)
class ReductionOutput:
    """A coloring-derived instance together with its decision thresholds.

    ``threshold_yes`` (exact dyadic) bounds the optimum from above when the
    graph is 3-colorable; ``threshold_no`` (kept as an exact base-2
    logarithm, since ``lam * k`` is rarely an integer) bounds it from below
    when it is not.
    """

    matrix: DissimilarityMatrix
    graph: InputGraph
    p: int
    k: int
    lam: Fraction
    m: int
    threshold_yes: Fraction
    log2_threshold_no: Fraction
    size_condition_met: bool

    @property
    def n(self) -> int:
        return self.p + self.k

    @property
    def threshold_no(self) -> float:
        return 2.0 ** float(self.log2_threshold_no)

    @property
    def log2_threshold_yes(self) -> float:
        return math.log2(self.m) + 2 - (2 * self.k + 4) / 3

    @property
    def log2_c(self) -> Fraction:
        """Base-2 log of the per-species separation factor."""
        return (Fraction(2, 3) - self.lam) * (3 - 4 * self.lam)

    def gap_certified(self) -> bool:
        """Exact check that threshold_no / threshold_yes >= c**n."""
        q = Fraction(2 * self.k + 4, 3) - self.lam * self.k - self.log2_c * self.n
        return _pow2_at_least(q, self.m)


def reduction_from_graph(graph: InputGraph, lam=Fraction(3, 5)) -> ReductionOutput:
    """Embed a graph 3-coloring question into a 0/1 instance.

    ``p`` and ``m`` refer to the graph after triangle padding.  ``k`` is
    minimal with ``k >= p / (2*lam - 1)`` and ``k = 1 (mod 3)``; the matrix
    has ``n = p + k`` species with a 1 exactly on adjacent vertex pairs.
    """
    lam = _as_lambda(lam)
    graph = ensure_two_disjoint_triangles(graph)
    p, m = graph.p, graph.m
    k = math.ceil(Fraction(p) / (2 * lam - 1))
    while k % 3 != 1:
        k += 1
    n = p + k
    rows = [[0] * n for _ in range(n)]
    for u, v in graph.edges:
        rows[u - 1][v - 1] = rows[v - 1][u - 1] = 1
    matrix = DissimilarityMatrix(rows)
    size_ok = _pow2_at_least((Fraction(2, 3) - lam) * p, m)
    threshold_yes = Fraction(m) * Fraction(2) ** (2 - (2 * k + 4) // 3)
    log2_no = 2 - lam * k
    return ReductionOutput(matrix, graph, p, k, lam, m, threshold_yes, log2_no, size_ok)


def witness_tree(graph: InputGraph, coloring, k: int) -> LeafTree:
    """Cubic certificate tree for a properly 3-colored graph.

    One path per color class hangs off a shared hub vertex.  The leaves
    nearest the hub stay free for the ``k`` padding species; the class
    members sit on the far end of their path, so species joined by a graph
    edge lie on different paths at leaf distance at least ``(2k + 4) / 3``.

    ``coloring`` maps every vertex ``1..p`` to a color in {1, 2, 3}; each
    class must have at least two members (guaranteed once the graph
    contains two disjoint triangles).  Requires ``k = 1 (mod 3)`` and
    ``k >= 4``.
    """
    p = graph.p
    colors = {v: int(coloring[v]) for v in range(1, p + 1)}
    if any(c not in (1, 2, 3) for c in colors.values()):
        raise ValueError("colors must be in {1, 2, 3}")
    for u, v in graph.edges:
        if colors[u] == colors[v]:
            raise ValueError(f"coloring is not proper: edge ({u}, {v}) is monochromatic")
    classes = [sorted(v for v in colors if colors[v] == c) for c in (1, 2, 3)]
    for c, members in enumerate(classes, start=1):
        if len(members) < 2:
            raise ValueError(f"color class {c} has fewer than 2 vertices")
    if k % 3 != 1:
        raise ValueError("k must be congruent to 1 modulo 3")
    if k < 4:
        raise ValueError("k must be at least 4")

    n = p + k
    # the first path absorbs the one extra free slot so the counts close:
    # free slots total k, class slots total p, leaves total n
    free_quota = [(k - 1) // 3 + 1, (k - 1) // 3, (k - 1) // 3]
    next_internal = n
    edges = []
    labels = {}
    hub = next_internal
    next_internal += 1
    free_slots = []  # internal vertices awaiting a padding-species leaf

    def attach_leaf(vertex, species):
        edges.append((vertex, species - 1))
        labels[species - 1] = species

    for quota, members in zip(free_quota, classes):
        length = quota + len(members) - 1
        path = list(range(next_internal, next_internal + length))
        next_internal += length
        edges.extend(zip(path, path[1:]))
        edges.append((hub, path[0]))
        # two pendant leaves at the far endpoint, one everywhere else
        far = path[-1]
        class_slots = [far, far] + [path[-1 - t] for t in range(1, len(members) - 1)]
        for vertex, species in zip(class_slots, members):
            attach_leaf(vertex, species)
        free_slots.extend(path[:quota])

    for offset, vertex in enumerate(free_slots):
        attach_leaf(vertex, p + 1 + offset)

    return LeafTree(edges, labels)
