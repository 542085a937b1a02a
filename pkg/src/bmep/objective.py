"""Tree-length objective and its pair-weight matrix.

For a leaf-labeled tree ``T`` the weight of a leaf pair ``(i, j)`` is

    pi(i, j) = 2 * prod(1 / (deg(u) - 1))  over internal vertices u
               strictly between the two leaves,

which on a cubic tree collapses to ``2**(2 - d(i, j))`` with ``d`` the edge
count of the leaf path.  The objective of a dissimilarity matrix ``D`` is
``f(T) = sum_{i<j} D[i][j] * pi(i, j)``.  Every row of the pair-weight
matrix sums to exactly 2, for any tree; consequently the all-ones matrix
scores ``n`` on every cubic topology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    DissimilarityMatrix,
    DyadicRational,
    LeafTree,
    ValueMode,
    default_mode,
)


@dataclass(frozen=True)
class PiMatrix:
    """Symmetric pair weights with zero diagonal; exact or binary64 entries."""

    n: int
    entries: tuple
    mode: ValueMode

    def row_sums(self) -> tuple:
        return tuple(sum(row) for row in self.entries)


@dataclass(frozen=True)
class ObjectiveValue:
    """Objective value together with the arithmetic mode that produced it."""

    value: object
    mode: ValueMode

    def __float__(self):
        return float(self.value)


def _resolve_mode(matrix: DissimilarityMatrix, mode) -> ValueMode:
    if mode is None:
        return default_mode(matrix)
    if mode is ValueMode.EXACT and not matrix.is_integer_valued:
        raise ValueError("exact mode requires integer matrix entries")
    return mode


def _pi_row(tree: LeafTree, src_leaf: int, one):
    """Pair weights from one leaf to all others, keyed by leaf vertex."""
    row = {}
    start = tree.neighbors(src_leaf)[0]
    stack = [(start, src_leaf, one)]
    while stack:
        v, parent, acc = stack.pop()
        if tree.is_leaf(v):
            row[v] = 2 * acc
            continue
        acc = acc / (tree.degree(v) - 1)
        for w in tree.neighbors(v):
            if w != parent:
                stack.append((w, v, acc))
    return row


def _dyadic_friendly(tree: LeafTree) -> bool:
    # every internal degree d with d - 1 a power of two keeps weights dyadic
    return all((tree.degree(v) - 1) & (tree.degree(v) - 2) == 0 for v in tree.internal_vertices)


def pi_matrix(tree: LeafTree, mode: ValueMode = ValueMode.EXACT) -> PiMatrix:
    """Pair-weight matrix of ``tree``; rows/columns follow species order.

    Exact mode uses dyadic values when every internal degree ``d`` has
    ``d - 1`` a power of two (always true on cubic trees) and exact
    rationals otherwise.
    """
    n = tree.n_leaves
    if mode is ValueMode.EXACT and tree.is_cubic():
        d = tree.leaf_distances()
        entries = tuple(
            tuple(DyadicRational(1, 2 - d[i][j]) if i != j else 0 for j in range(n))
            for i in range(n)
        )
        return PiMatrix(n, entries, mode)

    one = Fraction(1) if mode is ValueMode.EXACT else 1.0
    rows = []
    for s in range(1, n + 1):
        row = _pi_row(tree, tree.leaf_of(s), one)
        rows.append([row[tree.leaf_of(t)] if t != s else (0 if mode is ValueMode.EXACT else 0.0)
                     for t in range(1, n + 1)])
    if mode is ValueMode.EXACT and _dyadic_friendly(tree):
        rows = [[DyadicRational.from_fraction(x) if x else 0 for x in row] for row in rows]
    return PiMatrix(n, tuple(tuple(row) for row in rows), mode)


def _as_dyadic_if_possible(value):
    if isinstance(value, Fraction):
        den = value.denominator
        if den & (den - 1) == 0:
            return DyadicRational.from_fraction(value)
    return value


def evaluate(tree: LeafTree, matrix: DissimilarityMatrix, mode: ValueMode | None = None) -> ObjectiveValue:
    """Objective ``f(tree) = sum_{i<j} D[i][j] * pi(i, j)``.

    ``mode=None`` picks exact arithmetic for integer matrices and binary64
    otherwise.  On cubic trees the exact path evaluates the closed form
    ``sum D[i][j] * 2**(2 - d_ij)`` over a common power-of-two scale.
    """
    n = matrix.n
    if tree.n_leaves != n:
        raise ValueError(f"tree has {tree.n_leaves} leaves but matrix is {n}x{n}")
    mode = _resolve_mode(matrix, mode)
    rows = matrix.rows

    if mode is ValueMode.EXACT and tree.is_cubic():
        d = tree.leaf_distances()
        shift = max(max(r) for r in d)
        total = 0
        for i in range(n):
            di = d[i]
            ri = rows[i]
            for j in range(i + 1, n):
                total += ri[j] << (shift - di[j])
        value = DyadicRational(total, 2 - shift)
        if __debug__ and n <= 8:
            pi = pi_matrix(tree, ValueMode.EXACT).entries
            check = sum(rows[i][j] * pi[i][j] for i in range(n) for j in range(i + 1, n))
            assert value == check
        return ObjectiveValue(value, mode)

    pi = pi_matrix(tree, mode).entries
    if mode is ValueMode.EXACT:
        total = sum(rows[i][j] * pi[i][j] for i in range(n) for j in range(i + 1, n))
        return ObjectiveValue(_as_dyadic_if_possible(total), mode)
    total = 0.0
    for i in range(n):
        ri = rows[i]
        pii = pi[i]
        for j in range(i + 1, n):
            total += float(ri[j]) * pii[j]
    return ObjectiveValue(total, mode)


def kraft_row_sums(tree: LeafTree, mode: ValueMode = ValueMode.EXACT) -> tuple:
    """Row sums of the pair-weight matrix; exactly 2 per species on any tree."""
    return pi_matrix(tree, mode).row_sums()
