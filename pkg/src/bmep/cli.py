"""Command line front end.

Subcommands: ``evaluate`` (objective of a tree against a matrix),
``approx`` (spanning-tree approximation), ``exact`` (brute-force optimum),
``ratio`` (OPT/TSP/MST table over an instance family), ``gen`` (write
instance files), and ``tours`` (sample or enumerate embedding tours).

Reports are key/value text by default; ``--json`` emits a machine format
that is byte-stable across runs for identical inputs in exact mode (exact
values are serialized as strings, and timing is text-only).  Exit status is
0 only when no error occurred and every check the command advertises holds.
"""

from __future__ import annotations

import argparse
import json
import math
import statistics
import sys
import time
from fractions import Fraction
from pathlib import Path

from .approx import approximate
from .exact import DEFAULT_ENUMERATION_CAP, solve_exact
from .instances import (
    all_ones,
    cycle_metric,
    metric_lift,
    random_metric,
    reduction_from_graph,
    star_metric,
    witness_tree,
)
from .io import read_graph, read_matrix, read_newick, write_matrix, write_newick
from .model import FLOAT_RTOL, DyadicRational, ValueMode, is_metric
from .objective import evaluate, kraft_row_sums
from .tours import (
    DEFAULT_EMBEDDING_CAP,
    enumerate_compatible_tours,
    mst_cost,
    sample_compatible_tour,
    tour_cost,
    tsp_exact,
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_fmt(v) for v in value)
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return str(value)


class Report:
    """Ordered key/value output; numeric fields carry their arithmetic mode."""

    def __init__(self, command: str):
        self._items = [("command", command, None)]

    def add(self, key, value, mode: ValueMode | None = None):
        self._items.append((key, value, mode))

    def print_text(self, elapsed: float | None = None):
        for key, value, mode in self._items:
            tag = f" ({mode.value})" if mode is not None else ""
            print(f"{key}: {_fmt(value)}{tag}")
        if elapsed is not None:
            print(f"elapsed_s: {elapsed:.3f} (float)")

    def print_json(self):
        out = {}
        for key, value, mode in self._items:
            if mode is None:
                out[key] = _json_value(value)
            else:
                out[key] = {"value": _json_value(value), "mode": mode.value}
        print(json.dumps(out, indent=2))


def _mode_arg(value: str | None) -> ValueMode | None:
    if value is None:
        return None
    return ValueMode.EXACT if value == "exact" else ValueMode.FLOAT


def _read_matrix_file(path: str):
    return read_matrix(Path(path).read_text())


def _read_tree_file(path: str):
    return read_newick(Path(path).read_text())


def _parse_range(text: str):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ValueError(f"bad range {text!r}, expected like 5..9") from None
    if lo < 3 or hi < lo:
        raise ValueError(f"bad range {text!r}")
    return range(lo, hi + 1)


def cmd_evaluate(args) -> int:
    matrix = _read_matrix_file(args.matrix)
    tree = _read_tree_file(args.tree)
    result = evaluate(tree, matrix, _mode_arg(args.mode))
    sums = kraft_row_sums(tree, result.mode)
    if result.mode is ValueMode.EXACT:
        kraft_ok = all(s == 2 for s in sums)
    else:
        kraft_ok = all(math.isclose(s, 2.0, rel_tol=FLOAT_RTOL) for s in sums)
    report = Report("evaluate")
    report.add("matrix", args.matrix)
    report.add("tree", args.tree)
    report.add("n", matrix.n)
    report.add("cubic", tree.is_cubic())
    report.add("objective", result.value, result.mode)
    report.add("kraft_row_sums", [_fmt(s) for s in sums], result.mode)
    report.add("kraft_ok", kraft_ok)
    _emit(report, args)
    return 0 if kraft_ok else 1


def cmd_approx(args) -> int:
    matrix = _read_matrix_file(args.matrix)
    res = approximate(matrix, _mode_arg(args.mode))
    if res.mode is ValueMode.EXACT:
        guarantee_ok = res.objective <= 2 * res.mst_bound
    else:
        guarantee_ok = res.objective <= 2 * res.mst_bound * (1 + FLOAT_RTOL)
    report = Report("approx")
    report.add("matrix", args.matrix)
    report.add("n", matrix.n)
    report.add("metric", res.metric)
    report.add("objective", res.objective, res.mode)
    report.add("mst_bound", res.mst_bound, res.mode)
    report.add("ratio_vs_mst", res.ratio_vs_mst, ValueMode.FLOAT)
    report.add("split_steps", res.steps)
    report.add("guarantee_ok", guarantee_ok if res.metric else "not applicable (non-metric)")
    report.add("tree", write_newick(res.tree))
    _emit(report, args)
    if args.tree_out:
        Path(args.tree_out).write_text(write_newick(res.tree) + "\n")
    return 0 if (not res.metric or guarantee_ok) else 1


def cmd_exact(args) -> int:
    matrix = _read_matrix_file(args.matrix)
    res = solve_exact(matrix, max_n=args.max_n, mode=_mode_arg(args.mode))
    report = Report("exact")
    report.add("matrix", args.matrix)
    report.add("n", matrix.n)
    report.add("optimum", res.optimum, res.mode)
    report.add("topologies_examined", res.topologies_examined)
    report.add("tree", write_newick(res.tree))
    _emit(report, args)
    if args.tree_out:
        Path(args.tree_out).write_text(write_newick(res.tree) + "\n")
    return 0


_FAMILIES = {
    "all-ones": all_ones,
    "star": star_metric,
    "cycle": cycle_metric,
}


def ratio_rows(family: str, ns, max_n: int = DEFAULT_ENUMERATION_CAP) -> list:
    """OPT/TSP/MST per instance size; shared by the CLI and experiment scripts."""
    gen = _FAMILIES[family]
    rows = []
    for n in ns:
        matrix = gen(n)
        opt = solve_exact(matrix, max_n=max_n).optimum
        tsp, _ = tsp_exact(matrix)
        mst = mst_cost(matrix)
        rows.append(
            {
                "n": n,
                "opt": opt,
                "tsp": tsp,
                "mst": mst,
                "opt_over_tsp": float(opt) / float(tsp),
                "opt_over_mst": float(opt) / float(mst),
            }
        )
    return rows


def cmd_ratio(args) -> int:
    if args.family not in ("cycle", "star"):
        raise ValueError(f"unsupported family {args.family!r} for ratio tables")
    ns = _parse_range(args.n_range)
    rows = ratio_rows(args.family, ns, max_n=args.max_n)
    chain_ok = all(row["opt"] >= row["tsp"] >= row["mst"] for row in rows)
    if args.csv:
        print("family,n,opt,tsp,mst,opt_over_tsp,opt_over_mst")
        for row in rows:
            print(
                f"{args.family},{row['n']},{_fmt(row['opt'])},{_fmt(row['tsp'])},"
                f"{_fmt(row['mst'])},{row['opt_over_tsp']!r},{row['opt_over_mst']!r}"
            )
        return 0 if chain_ok else 1
    report = Report("ratio")
    report.add("family", args.family)
    for row in rows:
        report.add(
            f"n={row['n']}",
            f"opt={_fmt(row['opt'])} tsp={_fmt(row['tsp'])} mst={_fmt(row['mst'])} "
            f"opt/tsp={row['opt_over_tsp']:.6f} opt/mst={row['opt_over_mst']:.6f}",
        )
    report.add("chain_ok", chain_ok)
    _emit(report, args)
    return 0 if chain_ok else 1


def _load_coloring(path: str, reduction) -> dict:
    colors = [int(t) for t in Path(path).read_text().split()]
    p = reduction.p
    if len(colors) == p:
        return {v: colors[v - 1] for v in range(1, p + 1)}
    # coloring of the unpadded graph: color each padding triangle 1, 2, 3
    if len(colors) < p and (p - len(colors)) % 3 == 0:
        while len(colors) < p:
            colors.extend([1, 2, 3])
        return {v: colors[v - 1] for v in range(1, p + 1)}
    raise ValueError(
        f"coloring has {len(colors)} entries; expected {p} (or the unpadded vertex count)"
    )


def cmd_gen(args) -> int:
    report = Report("gen")
    report.add("family", args.family)
    status = 0
    if args.family in _FAMILIES:
        if args.n is None:
            raise ValueError(f"--n is required for family {args.family!r}")
        matrix = _FAMILIES[args.family](args.n)
        report.add("n", matrix.n)
    elif args.family == "random":
        if args.n is None:
            raise ValueError("--n is required for family 'random'")
        matrix = random_metric(args.n, args.seed)
        report.add("n", matrix.n)
        report.add("seed", args.seed)
        report.add("metric", is_metric(matrix))
    elif args.family == "lift":
        if not args.matrix:
            raise ValueError("--matrix is required for family 'lift'")
        matrix = metric_lift(_read_matrix_file(args.matrix))
        report.add("n", matrix.n)
    elif args.family == "reduction":
        if not args.graph:
            raise ValueError("--graph is required for family 'reduction'")
        red = reduction_from_graph(read_graph(Path(args.graph).read_text()), args.lam)
        matrix = red.matrix
        report.add("p", red.p)
        report.add("m", red.m)
        report.add("k", red.k)
        report.add("n", red.n)
        report.add("lambda", red.lam, ValueMode.EXACT)
        report.add("threshold_yes", red.threshold_yes, ValueMode.EXACT)
        report.add("log2_threshold_yes", red.log2_threshold_yes, ValueMode.FLOAT)
        report.add("log2_threshold_no", red.log2_threshold_no, ValueMode.EXACT)
        report.add("size_condition_met", red.size_condition_met)
        report.add("gap_certified", red.gap_certified())
        if args.coloring:
            witness = witness_tree(red.graph, _load_coloring(args.coloring, red), red.k)
            cost = evaluate(witness, matrix, ValueMode.EXACT).value
            dist = witness.leaf_distances()
            bound = Fraction(2 * red.k + 4, 3)
            min_edge_dist = min(dist[u - 1][v - 1] for u, v in red.graph.edges)
            certificate_ok = cost <= red.threshold_yes and min_edge_dist >= bound
            report.add("witness_cost", cost, ValueMode.EXACT)
            report.add("witness_min_edge_distance", min_edge_dist)
            report.add("edge_distance_bound", bound, ValueMode.EXACT)
            report.add("certificate", "OK" if certificate_ok else "VIOLATED")
            if args.witness_out:
                Path(args.witness_out).write_text(write_newick(witness) + "\n")
                report.add("witness_file", args.witness_out)
            if not certificate_ok:
                status = 1
    else:
        raise ValueError(f"unknown family {args.family!r}")
    Path(args.out).write_text(write_matrix(matrix))
    report.add("matrix_file", args.out)
    _emit(report, args)
    return status


def cmd_tours(args) -> int:
    matrix = _read_matrix_file(args.matrix)
    tree = _read_tree_file(args.tree)
    mode = _mode_arg(args.mode)
    result = evaluate(tree, matrix, mode)
    report = Report("tours")
    report.add("matrix", args.matrix)
    report.add("tree", args.tree)
    report.add("n", matrix.n)
    report.add("objective", result.value, result.mode)
    status = 0
    if args.enumerate:
        tours = enumerate_compatible_tours(tree, cap=args.cap_embeddings)
        costs = [tour_cost(t, matrix) for t in tours]
        if result.mode is ValueMode.EXACT:
            mean = Fraction(sum(costs), len(costs))
            matches = mean == result.value
        else:
            mean = sum(float(c) for c in costs) / len(costs)
            matches = math.isclose(mean, result.value, rel_tol=FLOAT_RTOL)
        report.add("embeddings", len(costs))
        report.add("mean_tour_cost", mean, result.mode)
        report.add("mean_matches_objective", matches)
        status = 0 if matches else 1
    else:
        count = args.samples
        costs = [
            float(tour_cost(sample_compatible_tour(tree, args.seed + i), matrix))
            for i in range(count)
        ]
        mean = sum(costs) / count
        stderr = statistics.stdev(costs) / math.sqrt(count) if count > 1 else float("nan")
        report.add("samples", count)
        report.add("seed", args.seed)
        report.add("sample_mean", mean, ValueMode.FLOAT)
        report.add("sample_stderr", stderr, ValueMode.FLOAT)
        report.add("abs_gap_to_objective", abs(mean - float(result.value)), ValueMode.FLOAT)
    _emit(report, args)
    return status


def _emit(report: Report, args):
    if getattr(args, "json", False):
        report.print_json()
    else:
        report.print_text(elapsed=time.perf_counter() - args._t0)


def _add_common(parser, mode=True):
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    if mode:
        parser.add_argument("--mode", choices=["exact", "float"], default=None,
                            help="arithmetic mode (default: exact for integer data)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bmep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="objective of a tree against a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--tree", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("approx", help="spanning-tree approximation")
    p.add_argument("--matrix", required=True)
    p.add_argument("--tree-out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("exact", help="brute-force optimum over cubic topologies")
    p.add_argument("--matrix", required=True)
    p.add_argument("--max-n", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--tree-out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("ratio", help="OPT/TSP/MST table over a family")
    p.add_argument("--family", required=True, choices=["cycle", "star"])
    p.add_argument("--n-range", required=True, help="inclusive range, e.g. 5..9")
    p.add_argument("--max-n", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--csv", action="store_true")
    _add_common(p, mode=False)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("gen", help="write instance files")
    p.add_argument("--family", required=True,
                   choices=["all-ones", "star", "cycle", "random", "lift", "reduction"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--matrix", default=None, help="input matrix (family 'lift')")
    p.add_argument("--graph", default=None, help="input edge list (family 'reduction')")
    p.add_argument("--lam", type=Fraction, default=Fraction(3, 5),
                   help="separation parameter in (1/2, 2/3), e.g. 3/5 or 0.6")
    p.add_argument("--coloring", default=None,
                   help="proper 3-coloring, whitespace-separated colors per vertex")
    p.add_argument("--witness-out", default=None)
    p.add_argument("--out", required=True)
    _add_common(p, mode=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("tours", help="sample or enumerate embedding tours")
    p.add_argument("--matrix", required=True)
    p.add_argument("--tree", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--enumerate", action="store_true")
    group.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-embeddings", type=int, default=DEFAULT_EMBEDDING_CAP)
    _add_common(p)
    p.set_defaults(func=cmd_tours)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args._t0 = time.perf_counter()
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
