"""Core value types: dissimilarity matrices, leaf-labeled trees, dyadic numbers.

Conventions used throughout the package:

* Species are numbered ``1..n`` on every public surface (file formats,
  tours, leaf labels, graphs).  Internal arrays are 0-indexed; species
  ``s`` lives at row/column ``s - 1``.
* Tree vertices are plain integers.  Degree-1 vertices are leaves and carry
  species labels; internal vertex identifiers are arbitrary and are never
  serialized.
* All types are immutable after construction and safe to share freely.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

#: Relative tolerance for equality checks on float-mode results.
FLOAT_RTOL = 1e-9


class ValueMode(enum.Enum):
    """Arithmetic carrier for objective and pair-weight computations.

    EXACT uses dyadic/rational arithmetic and requires integer matrix
    entries.  FLOAT uses binary64; comparisons against float-mode results
    should allow a relative error of :data:`FLOAT_RTOL`.
    """

    EXACT = "exact"
    FLOAT = "float"


class DyadicRational:
    """Exact number ``mantissa * 2**exponent`` with arbitrary-precision mantissa.

    Normalized so that the mantissa is odd; zero is stored as ``0 * 2**0``.
    Values are closed under addition, subtraction and multiplication with
    integers and other dyadics.  Mixing with :class:`fractions.Fraction`
    falls back to exact rational arithmetic and returns a ``Fraction``.
    """

    __slots__ = ("_m", "_e")

    def __init__(self, mantissa: int, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            shift = (mantissa & -mantissa).bit_length() - 1
            mantissa >>= shift
            exponent += shift
        self._m = mantissa
        self._e = exponent

    @property
    def mantissa(self) -> int:
        return self._m

    @property
    def exponent(self) -> int:
        return self._e

    @classmethod
    def pow2(cls, exponent: int) -> "DyadicRational":
        """The value ``2**exponent``."""
        return cls(1, exponent)

    @classmethod
    def from_fraction(cls, value) -> "DyadicRational":
        """Convert an exact rational whose denominator is a power of two."""
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls(value.numerator, -(den.bit_length() - 1))

    def as_fraction(self) -> Fraction:
        if self._e >= 0:
            return Fraction(self._m << self._e)
        return Fraction(self._m, 1 << -self._e)

    @property
    def numerator(self) -> int:
        return self._m << self._e if self._e >= 0 else self._m

    @property
    def denominator(self) -> int:
        return 1 if self._e >= 0 else 1 << -self._e

    def __add__(self, other):
        if isinstance(other, DyadicRational):
            e = min(self._e, other._e)
            return DyadicRational(
                (self._m << (self._e - e)) + (other._m << (other._e - e)), e
            )
        if isinstance(other, int):
            return self + DyadicRational(other)
        if isinstance(other, Fraction):
            return self.as_fraction() + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return DyadicRational(-self._m, self._e)

    def __sub__(self, other):
        if isinstance(other, (DyadicRational, int)):
            return self.__add__(-other)
        if isinstance(other, Fraction):
            return self.as_fraction() - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, DyadicRational):
            return DyadicRational(self._m * other._m, self._e + other._e)
        if isinstance(other, int):
            return DyadicRational(self._m * other, self._e)
        if isinstance(other, Fraction):
            return self.as_fraction() * other
        return NotImplemented

    __rmul__ = __mul__

    def _cmp_value(self, other):
        if isinstance(other, DyadicRational):
            return other.as_fraction()
        if isinstance(other, (int, Fraction, float)):
            return other
        return None

    def __eq__(self, other):
        v = self._cmp_value(other)
        if v is None:
            return NotImplemented
        return self.as_fraction() == v

    def __lt__(self, other):
        v = self._cmp_value(other)
        if v is None:
            return NotImplemented
        return self.as_fraction() < v

    def __le__(self, other):
        v = self._cmp_value(other)
        if v is None:
            return NotImplemented
        return self.as_fraction() <= v

    def __gt__(self, other):
        v = self._cmp_value(other)
        if v is None:
            return NotImplemented
        return self.as_fraction() > v

    def __ge__(self, other):
        v = self._cmp_value(other)
        if v is None:
            return NotImplemented
        return self.as_fraction() >= v

    def __hash__(self):
        return hash(self.as_fraction())

    def __bool__(self):
        return self._m != 0

    def __float__(self):
        return float(self.as_fraction())

    def __repr__(self):
        return f"DyadicRational({self._m}, {self._e})"

    def __str__(self):
        return str(self.as_fraction())


def _normalize_entry(x):
    if isinstance(x, bool):
        raise TypeError("matrix entries must be numbers, not bool")
    if isinstance(x, int):
        v = x
    elif isinstance(x, Fraction):
        v = x.numerator if x.denominator == 1 else x
    elif isinstance(x, DyadicRational):
        f = x.as_fraction()
        v = f.numerator if f.denominator == 1 else f
    elif isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("matrix entry is not a finite number")
        v = int(x) if x.is_integer() else x
    else:
        raise TypeError(f"unsupported matrix entry type: {type(x).__name__}")
    if v < 0:
        raise ValueError("negative entry in dissimilarity matrix")
    return v


class DissimilarityMatrix:
    """Symmetric nonnegative dissimilarities over species ``1..n``, zero diagonal.

    Entries are integers, exact rationals, or binary64 floats.  Integer-valued
    matrices support exact-mode computations throughout the package.
    """

    __slots__ = ("_n", "_rows")

    def __init__(self, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n < 3:
            raise ValueError("dimension mismatch: need at least 3 species")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"dimension mismatch: row {i + 1} has {len(row)} entries, expected {n}")
        norm = [[_normalize_entry(x) for x in row] for row in rows]
        for i in range(n):
            if norm[i][i] != 0:
                raise ValueError(f"nonzero diagonal entry for species {i + 1}")
            for j in range(i + 1, n):
                if norm[i][j] != norm[j][i]:
                    raise ValueError(f"asymmetric entries for species pair ({i + 1}, {j + 1})")
        self._n = n
        self._rows = tuple(tuple(row) for row in norm)

    @property
    def n(self) -> int:
        return self._n

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def is_integer_valued(self) -> bool:
        return all(isinstance(x, int) for row in self._rows for x in row)

    def __getitem__(self, ij):
        """Entry for a species pair; indices are 1-based like species labels."""
        i, j = ij
        if not (1 <= i <= self._n and 1 <= j <= self._n):
            raise IndexError(f"species pair ({i}, {j}) out of range 1..{self._n}")
        return self._rows[i - 1][j - 1]

    def __eq__(self, other):
        if not isinstance(other, DissimilarityMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"DissimilarityMatrix(n={self._n})"


def new_matrix(n: int, entries: Sequence) -> DissimilarityMatrix:
    """Build an ``n`` x ``n`` dissimilarity matrix.

    ``entries`` is either a flat lower triangle in row-major order
    (``d(2,1), d(3,1), d(3,2), ...``; length ``n*(n-1)/2``), a flat square
    (length ``n*n``), or ``n`` nested rows of length ``n``.
    """
    entries = list(entries)
    if n < 3:
        raise ValueError("dimension mismatch: need at least 3 species")
    if len(entries) == n and all(isinstance(r, (list, tuple)) for r in entries):
        return DissimilarityMatrix(entries)
    if len(entries) == n * (n - 1) // 2:
        rows = [[0] * n for _ in range(n)]
        it = iter(entries)
        for i in range(1, n):
            for j in range(i):
                rows[i][j] = rows[j][i] = next(it)
        return DissimilarityMatrix(rows)
    if len(entries) == n * n:
        rows = [entries[i * n:(i + 1) * n] for i in range(n)]
        return DissimilarityMatrix(rows)
    raise ValueError(
        f"dimension mismatch: got {len(entries)} entries for n={n} "
        f"(expected {n * (n - 1) // 2} triangular or {n * n} square)"
    )


def is_metric(matrix: DissimilarityMatrix) -> bool:
    """True when the triangle inequality holds for every triple.

    Zero off-diagonal entries are allowed; symmetry and nonnegativity are
    already guaranteed by construction.
    """
    n = matrix.n
    rows = matrix.rows
    for i in range(n):
        ri = rows[i]
        for k in range(i + 1, n):
            dik = ri[k]
            rk = rows[k]
            for j in range(n):
                if j != i and j != k and dik > ri[j] + rk[j]:
                    return False
    return True


def default_mode(matrix: DissimilarityMatrix) -> ValueMode:
    """Exact whenever every matrix entry is an integer, float otherwise."""
    return ValueMode.EXACT if matrix.is_integer_valued else ValueMode.FLOAT


class LeafTree:
    """Unrooted tree whose degree-1 vertices are bijectively labeled ``1..n``.

    Internal vertices must have degree >= 2; a tree is *cubic* when every
    internal vertex has degree exactly 3.  Instances are immutable; editing
    operations elsewhere in the package return new trees.
    """

    __slots__ = ("_adj", "_leaf_label", "_species_leaf", "_distances")

    def __init__(self, edges: Iterable, leaf_label: Mapping[int, int]):
        adj: dict[int, set] = {}
        edge_set = set()
        for e in edges:
            u, v = e
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in edge_set:
                raise ValueError(f"duplicate edge {key}")
            edge_set.add(key)
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        if not adj:
            raise ValueError("tree has no edges")
        if len(edge_set) != len(adj) - 1:
            raise ValueError("edge set does not form a tree")
        # connectivity
        start = next(iter(adj))
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != len(adj):
            raise ValueError("edge set does not form a tree (disconnected)")

        labels = {int(v): int(s) for v, s in leaf_label.items()}
        degree_one = {v for v, nb in adj.items() if len(nb) == 1}
        if set(labels) != degree_one:
            raise ValueError("leaf labels must cover exactly the degree-1 vertices")
        n = len(labels)
        if n < 3:
            raise ValueError("need at least 3 leaves")
        if sorted(labels.values()) != list(range(1, n + 1)):
            raise ValueError("leaf labels must be a bijection onto 1..n")

        self._adj = {v: tuple(sorted(nb)) for v, nb in adj.items()}
        self._leaf_label = labels
        self._species_leaf = {s: v for v, s in labels.items()}
        self._distances = None

    @property
    def n_leaves(self) -> int:
        return len(self._leaf_label)

    @property
    def vertices(self) -> tuple:
        return tuple(sorted(self._adj))

    @property
    def edges(self) -> tuple:
        out = []
        for v, nbrs in self._adj.items():
            for w in nbrs:
                if v < w:
                    out.append((v, w))
        return tuple(sorted(out))

    @property
    def leaves(self) -> tuple:
        return tuple(sorted(self._leaf_label))

    @property
    def internal_vertices(self) -> tuple:
        return tuple(sorted(v for v in self._adj if v not in self._leaf_label))

    def neighbors(self, v: int) -> tuple:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def is_leaf(self, v: int) -> bool:
        return v in self._leaf_label

    def species_of(self, v: int) -> int:
        return self._leaf_label[v]

    def leaf_of(self, species: int) -> int:
        return self._species_leaf[species]

    def is_cubic(self) -> bool:
        return all(len(self._adj[v]) == 3 for v in self._adj if v not in self._leaf_label)

    def leaf_distances(self) -> tuple:
        """Edge counts between every pair of leaves, indexed by species - 1."""
        if self._distances is None:
            n = self.n_leaves
            rows = []
            for s in range(1, n + 1):
                src = self._species_leaf[s]
                dist = {src: 0}
                queue = deque([src])
                while queue:
                    x = queue.popleft()
                    dx = dist[x] + 1
                    for y in self._adj[x]:
                        if y not in dist:
                            dist[y] = dx
                            queue.append(y)
                rows.append(tuple(dist[self._species_leaf[t]] for t in range(1, n + 1)))
            self._distances = tuple(rows)
        return self._distances

    def __eq__(self, other):
        if not isinstance(other, LeafTree):
            return NotImplemented
        return self._adj == other._adj and self._leaf_label == other._leaf_label

    def __hash__(self):
        return hash((tuple(sorted(self._adj.items())), tuple(sorted(self._leaf_label.items()))))

    def __repr__(self):
        return f"LeafTree(n_leaves={self.n_leaves}, vertices={len(self._adj)})"


def leaf_distances(tree: LeafTree) -> tuple:
    """n x n matrix of pairwise leaf distances (edge counts), species order."""
    return tree.leaf_distances()


def is_cubic(tree: LeafTree) -> bool:
    """True when every internal vertex has degree exactly 3."""
    return tree.is_cubic()
