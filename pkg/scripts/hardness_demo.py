#!/usr/bin/env python3
"""Walk a graph through the 3-coloring reduction and check its certificate.

Builds the padded instance for a named graph (or one read from a file),
prints the decision thresholds, and, when the graph's 3-coloring is known,
assembles the witness tree and verifies every certificate condition: leaf
count, cubicity, pairwise distances across graph edges, and the exact
objective bound.

Examples:
    python3 scripts/hardness_demo.py --graph petersen
    python3 scripts/hardness_demo.py --graph c5 --lam 0.55
    python3 scripts/hardness_demo.py --graph-file my.graph --coloring-file my.colors
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from bmep.instances import InputGraph, reduction_from_graph, witness_tree
from bmep.io import read_graph, write_newick
from bmep.model import ValueMode
from bmep.objective import evaluate

NAMED = {
    "k3": (
        InputGraph(3, [(1, 2), (2, 3), (1, 3)]),
        {1: 1, 2: 2, 3: 3},
    ),
    "c5": (
        InputGraph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]),
        {1: 1, 2: 2, 3: 1, 4: 2, 5: 3},
    ),
    "petersen": (
        InputGraph(
            10,
            [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
            + [(i, i + 5) for i in range(1, 6)]
            + [(6, 8), (8, 10), (10, 7), (7, 9), (9, 6)],
        ),
        {1: 1, 2: 2, 3: 1, 4: 2, 5: 3, 6: 2, 7: 1, 8: 3, 9: 3, 10: 2},
    ),
}


def pad_coloring(base: dict, p: int) -> dict:
    colors = dict(base)
    v = len(base) + 1
    while v <= p:
        for c in (1, 2, 3):
            colors[v] = c
            v += 1
    return colors


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--graph", choices=sorted(NAMED))
    source.add_argument("--graph-file")
    parser.add_argument("--coloring-file", help="whitespace-separated colors, one per vertex")
    parser.add_argument("--lam", type=Fraction, default=Fraction(3, 5))
    parser.add_argument("--witness-out", help="write the witness tree in newick form")
    args = parser.parse_args()

    if args.graph:
        graph, coloring = NAMED[args.graph]
    else:
        graph = read_graph(Path(args.graph_file).read_text())
        coloring = None
    if args.coloring_file:
        tokens = Path(args.coloring_file).read_text().split()
        coloring = {v: int(c) for v, c in enumerate(tokens, start=1)}

    red = reduction_from_graph(graph, args.lam)
    print(f"input graph: p0={graph.p} m0={graph.m}; padded: p={red.p} m={red.m}")
    print(f"lam={red.lam}  k={red.k}  species n={red.n}")
    print(f"threshold_yes = m * 2^(2-(2k+4)/3) = {red.threshold_yes}")
    print(f"threshold_no  = 2^(2-lam*k) = 2^({red.log2_threshold_no})")
    print(f"size condition m <= 2^((2/3-lam)p): {'met' if red.size_condition_met else 'NOT met'}")
    print(f"gap threshold_no/threshold_yes >= c^n: "
          f"{'certified' if red.gap_certified() else 'not certified'} "
          f"(log2 c = {red.log2_c})")

    if coloring is None:
        print("no coloring given; stopping before the witness construction")
        return 0

    full = pad_coloring(coloring, red.p)
    witness = witness_tree(red.graph, full, red.k)
    cost = evaluate(witness, red.matrix, ValueMode.EXACT).value
    bound = Fraction(2 * red.k + 4, 3)
    d = witness.leaf_distances()
    min_edge = min(d[u - 1][v - 1] for u, v in red.graph.edges)

    print(f"witness: {witness.n_leaves} leaves, cubic={witness.is_cubic()}")
    print(f"minimum leaf distance across graph edges: {min_edge} (needs >= {bound})")
    print(f"witness objective: {cost}")
    ok = (
        witness.is_cubic()
        and witness.n_leaves == red.n
        and min_edge >= bound
        and cost <= red.threshold_yes
    )
    print(f"certificate: {'OK' if ok else 'VIOLATED'}")
    if args.witness_out:
        Path(args.witness_out).write_text(write_newick(witness) + "\n")
        print(f"witness written to {args.witness_out}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
