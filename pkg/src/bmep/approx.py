"""Spanning-tree construction of low-cost cubic trees.

Pipeline: build a minimum spanning tree on the species, relabel every
internal species as an unlabeled vertex with a fresh pendant leaf carrying
the species, then repeatedly split vertices of degree above three, each
time choosing the split that minimizes the objective.  Splitting never
increases the objective because the original pair weights are the uniform
average of the pair weights over all candidate splits, so for metric data
the final cubic tree costs at most twice the spanning-tree weight, hence
at most twice the optimum.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    DissimilarityMatrix,
    LeafTree,
    ValueMode,
    default_mode,
    is_metric,
)
from .objective import evaluate, pi_matrix


def minimum_spanning_tree(matrix: DissimilarityMatrix) -> tuple:
    """Deterministic minimum spanning tree on species ``1..n``.

    Candidate edges are processed in (weight, small endpoint, large
    endpoint) order, so ties always resolve the same way.
    """
    n = matrix.n
    rows = matrix.rows
    edges = sorted(
        (rows[i][j], i + 1, j + 1) for i in range(n) for j in range(i + 1, n)
    )
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for _, u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
            if len(chosen) == n - 1:
                break
    return tuple(chosen)


def pull_leaves(spanning_edges) -> LeafTree:
    """Turn a spanning tree on species into a leaf-labeled tree.

    Species of degree 1 stay as labeled leaves.  Every species of degree
    >= 2 becomes an unlabeled internal vertex with one new pendant leaf
    carrying its label, raising its degree by one.
    """
    edges = [(int(u), int(v)) for u, v in spanning_edges]
    species = sorted({x for e in edges for x in e})
    n = len(species)
    if species != list(range(1, n + 1)) or len(edges) != n - 1:
        raise ValueError("input is not a spanning tree on species 1..n")
    degree = Counter()
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    vmap = {}
    next_id = n
    for s in species:
        if degree[s] == 1:
            vmap[s] = s - 1
        else:
            vmap[s] = next_id
            next_id += 1
    out = [(vmap[u], vmap[v]) for u, v in edges]
    labels = {}
    for s in species:
        labels[s - 1] = s
        if degree[s] > 1:
            out.append((vmap[s], s - 1))
    return LeafTree(out, labels)


def suppress_degree_two(tree: LeafTree) -> LeafTree:
    """Splice out internal degree-2 vertices; pair weights are unchanged."""
    adj = {v: set(tree.neighbors(v)) for v in tree.vertices}
    labels = {tree.leaf_of(s): s for s in range(1, tree.n_leaves + 1)}
    removable = sorted(v for v in adj if v not in labels and len(adj[v]) == 2)
    if not removable:
        return tree
    for v in removable:
        a, b = sorted(adj[v])
        adj[a].discard(v)
        adj[b].discard(v)
        adj[a].add(b)
        adj[b].add(a)
        del adj[v]
    edges = [(u, w) for u, nbrs in adj.items() for w in nbrs if u < w]
    return LeafTree(edges, labels)


def split_vertex(tree: LeafTree, u: int, v1: int, v2: int) -> LeafTree:
    """Detach neighbors ``v1, v2`` of ``u`` onto a new vertex adjacent to ``u``.

    Requires ``deg(u) > 3``; the result has one more vertex and one more
    edge, with ``deg(u)`` reduced by one and the new vertex of degree 3.
    """
    if tree.is_leaf(u):
        raise ValueError(f"vertex {u} is a leaf, not internal")
    if tree.degree(u) <= 3:
        raise ValueError(f"vertex {u} has degree {tree.degree(u)}; splitting requires degree > 3")
    nbrs = tree.neighbors(u)
    if v1 == v2 or v1 not in nbrs or v2 not in nbrs:
        raise ValueError(f"{v1}, {v2} must be distinct neighbors of {u}")
    w = max(tree.vertices) + 1
    drop = {tuple(sorted((u, v1))), tuple(sorted((u, v2)))}
    edges = [e for e in tree.edges if e not in drop]
    edges += [(u, w), (w, v1), (w, v2)]
    labels = {tree.leaf_of(s): s for s in range(1, tree.n_leaves + 1)}
    return LeafTree(edges, labels)


def _branch_of_species(tree: LeafTree, u: int) -> list:
    """For each species index (0-based), the neighbor of ``u`` toward it."""
    n = tree.n_leaves
    branch = [None] * n
    for nb in tree.neighbors(u):
        stack = [(nb, u)]
        while stack:
            v, parent = stack.pop()
            if tree.is_leaf(v):
                branch[tree.species_of(v) - 1] = nb
                continue
            for w in tree.neighbors(v):
                if w != parent:
                    stack.append((w, v))
    return branch


def _best_split(tree: LeafTree, u: int, matrix: DissimilarityMatrix, mode: ValueMode) -> LeafTree:
    """Apply the objective-minimizing split at ``u``; ties pick the
    lexicographically smallest neighbor pair."""
    n = matrix.n
    q = tree.degree(u)
    exact = mode is ValueMode.EXACT
    pi = pi_matrix(tree, mode).entries
    rows = matrix.rows
    nbrs = tree.neighbors(u)
    idx = {nb: t for t, nb in enumerate(nbrs)}
    branch = _branch_of_species(tree, u)

    # aggregate delta * pi per unordered branch pair; only paths through u move
    weight = [[0] * q for _ in range(q)]
    for i in range(n):
        bi = idx[branch[i]]
        ri = rows[i]
        pii = pi[i]
        for j in range(i + 1, n):
            bj = idx[branch[j]]
            if bi != bj:
                a, b = (bi, bj) if bi < bj else (bj, bi)
                w = (float(ri[j]) * pii[j]) if not exact else ri[j] * pii[j]
                if w:
                    weight[a][b] = weight[a][b] + w

    if exact:
        r_new = Fraction(q - 1, 2)            # path now passes only the new vertex
        r_both = Fraction(q - 1, 2 * (q - 2))  # path passes both u and the new vertex
        r_old = Fraction(q - 1, q - 2)        # path stays on u alone
    else:
        r_new = (q - 1) / 2.0
        r_both = (q - 1) / (2.0 * (q - 2))
        r_old = (q - 1) / (q - 2.0)

    best_pair = None
    best_score = None
    for a in range(q):
        for b in range(a + 1, q):
            score = 0
            for x in range(q):
                wx = weight[x]
                for y in range(x + 1, q):
                    w = wx[y]
                    if not w:
                        continue
                    hits = (x == a or x == b) + (y == a or y == b)
                    score = score + w * (r_new if hits == 2 else r_both if hits == 1 else r_old)
            if best_score is None or score < best_score:
                best_score = score
                best_pair = (a, b)

    new_tree = split_vertex(tree, u, nbrs[best_pair[0]], nbrs[best_pair[1]])
    if __debug__ and n <= 8:
        through = sum(weight[x][y] for x in range(q) for y in range(x + 1, q))
        f_old = evaluate(tree, matrix, mode).value
        f_new = evaluate(new_tree, matrix, mode).value
        predicted = f_old - through + best_score
        if exact:
            assert f_new == predicted
        else:
            assert math.isclose(f_new, predicted, rel_tol=1e-6, abs_tol=1e-9)
    return new_tree


def _round_to_cubic(tree: LeafTree, matrix: DissimilarityMatrix, mode: ValueMode):
    tree = suppress_degree_two(tree)
    steps = 0
    while True:
        over = [v for v in tree.internal_vertices if tree.degree(v) > 3]
        if not over:
            return tree, steps
        # largest degree first; ties broken by smallest vertex identifier
        u = max(over, key=lambda v: (tree.degree(v), -v))
        tree = _best_split(tree, u, matrix, mode)
        steps += 1


def round_to_cubic(tree: LeafTree, matrix: DissimilarityMatrix, mode: ValueMode | None = None) -> LeafTree:
    """Resolve every vertex of degree above three by greedy minimum splits.

    Degree-2 vertices are spliced out first.  Each round picks the vertex
    of largest degree and the split minimizing the objective, so the final
    cubic tree scores no worse than the input tree.
    """
    if mode is None:
        mode = default_mode(matrix)
    if tree.n_leaves != matrix.n:
        raise ValueError(f"tree has {tree.n_leaves} leaves but matrix is {matrix.n}x{matrix.n}")
    out, _ = _round_to_cubic(tree, matrix, mode)
    return out


@dataclass(frozen=True)
class ApproxReport:
    """Result of the spanning-tree approximation."""

    tree: LeafTree
    objective: object
    mst_bound: object
    ratio_vs_mst: float
    steps: int
    metric: bool
    mode: ValueMode


def approximate(matrix: DissimilarityMatrix, mode: ValueMode | None = None) -> ApproxReport:
    """Spanning-tree approximation; for metric input the objective is at
    most ``2 * mst_bound`` and therefore at most twice the optimum.

    Non-metric input still yields a valid cubic tree, reported with
    ``metric=False`` and no guarantee on the ratio.
    """
    if mode is None:
        mode = default_mode(matrix)
    edges = minimum_spanning_tree(matrix)
    rows = matrix.rows
    bound = sum(rows[u - 1][v - 1] for u, v in edges)
    if mode is ValueMode.FLOAT:
        bound = float(bound)
    tree, steps = _round_to_cubic(pull_leaves(edges), matrix, mode)
    objective = evaluate(tree, matrix, mode).value
    if bound > 0:
        ratio = float(objective) / float(bound)
    else:
        ratio = 1.0 if not objective else math.inf
    return ApproxReport(tree, objective, bound, ratio, steps, is_metric(matrix), mode)
