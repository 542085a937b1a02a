"""Text formats: distance matrices, leaf-labeled trees, and edge lists.

Matrix files: first line ``n``, then one line per species holding a display
label followed by either the full row (square) or the entries below the
diagonal (lower-triangular; detected automatically).  Species identity is
the row order, 1-based.  Decimal entries are parsed exactly and integral
values (including ``2.0``) stay integers, so exact arithmetic remains
available for integer data.

Trees use Newick text without branch lengths, leaf names are species
numbers.  Graphs use ``p m`` followed by ``m`` lines ``u v``.
"""

from __future__ import annotations

from fractions import Fraction

from .instances import InputGraph
from .model import DissimilarityMatrix, LeafTree


def _parse_number(token: str):
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed number {token!r}") from None
    return value.numerator if value.denominator == 1 else value


def read_matrix(text: str) -> DissimilarityMatrix:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    if len(lines[0]) != 1:
        raise ValueError("first line must hold the species count alone")
    try:
        n = int(lines[0][0])
    except ValueError:
        raise ValueError(f"malformed species count {lines[0][0]!r}") from None
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"expected {n} matrix rows, found {len(body)}")
    counts = [len(row) - 1 for row in body]
    if counts == [n] * n:
        square = True
    elif counts == list(range(n)):
        square = False
    else:
        raise ValueError("rows match neither square nor lower-triangular form")
    rows = [[0] * n for _ in range(n)]
    for i, line in enumerate(body):
        values = [_parse_number(tok) for tok in line[1:]]
        if square:
            rows[i] = values
        else:
            for j, v in enumerate(values):
                rows[i][j] = rows[j][i] = v
    if square:
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"asymmetric entries for species pair ({i + 1}, {j + 1})")
    return DissimilarityMatrix(rows)


def _format_number(x) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else repr(float(x))
    return repr(x)


def write_matrix(matrix: DissimilarityMatrix) -> str:
    """Square form with species numbers as labels; parses back losslessly
    for integer matrices and to within 1e-12 for decimal ones."""
    lines = [str(matrix.n)]
    for i, row in enumerate(matrix.rows):
        lines.append(" ".join([str(i + 1)] + [_format_number(x) for x in row]))
    return "\n".join(lines) + "\n"


def write_newick(tree: LeafTree) -> str:
    """Newick text rooted at the internal vertex adjacent to leaf 1, children
    ordered by their smallest descendant species; no branch lengths."""

    def render(v, parent):
        if tree.is_leaf(v):
            s = tree.species_of(v)
            return str(s), s
        parts = [render(w, v) for w in tree.neighbors(v) if w != parent]
        parts.sort(key=lambda item: item[1])
        return "(" + ",".join(item[0] for item in parts) + ")", parts[0][1]

    root = tree.neighbors(tree.leaf_of(1))[0]
    text, _ = render(root, None)
    return text + ";"


def read_newick(text: str) -> LeafTree:
    s = "".join(text.split())
    if not s.endswith(";"):
        raise ValueError("newick text must end with ';'")
    s = s[:-1]
    pos = 0

    def parse_node():
        nonlocal pos
        if pos < len(s) and s[pos] == "(":
            pos += 1
            children = [parse_node()]
            while pos < len(s) and s[pos] == ",":
                pos += 1
                children.append(parse_node())
            if pos >= len(s) or s[pos] != ")":
                raise ValueError("unbalanced parentheses in newick text")
            pos += 1
            if len(children) < 2:
                raise ValueError("internal newick node needs at least 2 children")
            return children
        start = pos
        while pos < len(s) and s[pos] not in "(),;":
            pos += 1
        name = s[start:pos]
        if not name.isdigit():
            raise ValueError(f"leaf name {name!r} is not a species number")
        return int(name)

    top = parse_node()
    if pos != len(s):
        raise ValueError(f"unexpected trailing text {s[pos:]!r}")
    if isinstance(top, int):
        raise ValueError("newick text must describe a tree, not a single leaf")

    species = []

    def collect(node):
        if isinstance(node, int):
            species.append(node)
        else:
            for child in node:
                collect(child)

    collect(top)
    n = len(species)
    if sorted(species) != list(range(1, n + 1)):
        raise ValueError("leaf names must be exactly the species 1..n")

    edges = []
    counter = [n]

    def build(node):
        if isinstance(node, int):
            return node - 1
        vid = counter[0]
        counter[0] += 1
        for child in node:
            edges.append((vid, build(child)))
        return vid

    build(top)
    return LeafTree(edges, {i: i + 1 for i in range(n)})


def read_graph(text: str) -> InputGraph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ValueError("first line must be 'p m'")
    try:
        p, m = int(lines[0][0]), int(lines[0][1])
    except ValueError:
        raise ValueError("first line must be 'p m' with integers") from None
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"expected {m} edge lines, found {len(body)}")
    edges = set()
    for line in body:
        if len(line) != 2:
            raise ValueError(f"malformed edge line {' '.join(line)!r}")
        u, v = int(line[0]), int(line[1])
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (1 <= u <= p and 1 <= v <= p):
            raise ValueError(f"edge ({u}, {v}) out of range 1..{p}")
        key = (u, v) if u < v else (v, u)
        if key in edges:
            raise ValueError(f"duplicate edge ({key[0]}, {key[1]})")
        edges.add(key)
    return InputGraph(p, frozenset(edges))


def write_graph(graph: InputGraph) -> str:
    lines = [f"{graph.p} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in sorted(graph.edges))
    return "\n".join(lines) + "\n"
