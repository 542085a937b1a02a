"""Exhaustive enumeration of cubic topologies and the brute-force optimum.

Topologies are generated by inserting leaf ``k`` into each edge of every
topology on ``k - 1`` leaves, depth-first with undo, which visits each of
the ``(2n - 5)!!`` distinct cubic topologies exactly once and in a fixed
order.  The solver scores every topology; no pruning is attempted, so the
result can serve as ground truth for everything else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import DissimilarityMatrix, DyadicRational, LeafTree, ValueMode, default_mode

#: Default refusal threshold for exhaustive enumeration.
DEFAULT_ENUMERATION_CAP = 10


def topology_count(n: int) -> int:
    """(2n - 5)!! distinct cubic topologies on n labeled leaves."""
    count = 1
    for k in range(3, 2 * n - 4, 2):
        count *= k
    return count


def _edge_lists(n: int):
    """Yield the live edge list of every cubic topology; callers must copy.

    Leaf vertices are ``0..n-1`` (species minus one); internal vertices are
    allocated upward from ``n``.
    """
    edges = [(0, n), (1, n), (2, n)]
    if n == 3:
        yield edges
        return

    def insert(leaf, internal):
        last = leaf == n - 1
        for i in range(len(edges)):
            u, v = edges[i]
            edges[i] = (u, internal)
            edges.append((internal, v))
            edges.append((internal, leaf))
            if last:
                yield edges
            else:
                yield from insert(leaf + 1, internal + 1)
            edges.pop()
            edges.pop()
            edges[i] = (u, v)

    yield from insert(3, n + 1)


def enumerate_cubic_topologies(n: int, max_n: int = DEFAULT_ENUMERATION_CAP):
    """Generate every cubic topology on leaves ``1..n``, each exactly once.

    Refuses ``n`` above ``max_n``; the count grows as ``(2n - 5)!!``.
    """
    if n < 3:
        raise ValueError("need at least 3 leaves")
    if n > max_n:
        raise ValueError(
            f"n={n} exceeds the enumeration cap of {max_n} "
            f"({topology_count(n)} topologies)"
        )
    labels = {i: i + 1 for i in range(n)}
    for edges in _edge_lists(n):
        yield LeafTree(list(edges), labels)


@dataclass(frozen=True)
class ExactResult:
    """Optimum objective with a witness topology."""

    optimum: object
    tree: LeafTree
    topologies_examined: int
    mode: ValueMode


def solve_exact(matrix: DissimilarityMatrix, max_n: int = DEFAULT_ENUMERATION_CAP,
                mode: ValueMode | None = None) -> ExactResult:
    """Minimum objective over all cubic topologies, by full enumeration.

    Integer matrices are scored over a common power-of-two scale, keeping
    the comparison exact; the witness is the first minimizer in enumeration
    order.
    """
    n = matrix.n
    if n > max_n:
        raise ValueError(
            f"n={n} exceeds the enumeration cap of {max_n} "
            f"({topology_count(n)} topologies)"
        )
    if mode is None:
        mode = default_mode(matrix)
    if mode is ValueMode.EXACT and not matrix.is_integer_valued:
        raise ValueError("exact mode requires integer matrix entries")
    exact = mode is ValueMode.EXACT
    rows = matrix.rows if exact else tuple(tuple(float(x) for x in r) for r in matrix.rows)

    nv = 2 * n - 2
    shift = n  # leaf distances on a cubic tree never exceed n - 1
    adj = [[] for _ in range(nv)]
    best = None
    best_edges = None
    examined = 0
    for edges in _edge_lists(n):
        examined += 1
        for a in adj:
            a.clear()
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        total = 0 if exact else 0.0
        for src in range(n):
            dist = [-1] * nv
            dist[src] = 0
            queue = [src]
            qi = 0
            while qi < len(queue):
                x = queue[qi]
                qi += 1
                dx = dist[x] + 1
                for y in adj[x]:
                    if dist[y] < 0:
                        dist[y] = dx
                        queue.append(y)
            rs = rows[src]
            if exact:
                for j in range(src + 1, n):
                    total += rs[j] << (shift - dist[j])
            else:
                for j in range(src + 1, n):
                    total += rs[j] * 2.0 ** (2 - dist[j])
        if best is None or total < best:
            best = total
            best_edges = list(edges)
    optimum = DyadicRational(best, 2 - shift) if exact else best
    tree = LeafTree(best_edges, {i: i + 1 for i in range(n)})
    return ExactResult(optimum, tree, examined, mode)
