"""Exact linear algebra over the rationals.

Scalars are ``gmpy2.mpq`` values: always in lowest terms, positive
denominator, no rounding.  Matrices are sparse dictionaries of nonzero
entries.  Elimination uses a fixed pivot rule so that kernels, solutions
and homology representatives are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import gmpy2

Q = gmpy2.mpq
ZERO = Q(0)
ONE = Q(1)

Vector = dict  # column/row index -> nonzero Scalar


class DimensionMismatch(ValueError):
    pass


class BoundarySquareError(ValueError):
    """Raised when consecutive boundaries do not compose to zero."""

    def __init__(self, degree: int):
        super().__init__(f"boundary does not square to zero at degree {degree}")
        self.degree = degree


def scalar(x) -> "gmpy2.mpq":
    """Coerce ints, Fractions, decimal/fraction strings and mpq to a Scalar."""
    if isinstance(x, str):
        return Q(Fraction(x.strip()))
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    return Q(x)


def format_scalar(c) -> str:
    c = Q(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


@dataclass
class SparseMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (r, c) -> Scalar

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            v = scalar(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]]) -> "SparseMatrix":
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def to_dense(self) -> list[list]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def apply(self, x: Sequence) -> list:
        if len(x) != self.cols:
            raise DimensionMismatch(f"vector of length {len(x)} for {self.cols} columns")
        out = [ZERO] * self.rows
        for (r, c), v in self.entries.items():
            if x[c]:
                out[r] += v * x[c]
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        right_rows = other.row_dicts()
        acc: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in right_rows[k].items():
                acc[(r, c)] = acc.get((r, c), ZERO) + v * w
        return SparseMatrix(self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return not self.entries

    def rank(self) -> int:
        return len(_echelon(self.row_dicts()))


# -- elimination ------------------------------------------------------------

def _echelon(rows: Iterable[Mapping[int, object]]) -> dict:
    """Reduce rows to a basis with distinct leading columns (leading entry 1).

    Returns ``{lead_column: row}``.  The set of leading columns is the set of
    pivot columns of the reduced row echelon form, whatever the row order.
    """
    pivots: dict = {}
    for row in rows:
        r = {c: scalar(v) for c, v in row.items() if v}
        while r:
            lead = min(r)
            p = pivots.get(lead)
            if p is None:
                inv = ONE / r[lead]
                pivots[lead] = {c: v * inv for c, v in r.items()}
                break
            f = r[lead]
            for c, v in p.items():
                nv = r.get(c, ZERO) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return pivots


def _back_substitute(pivots: dict) -> dict:
    """Clear every pivot column from every other pivot row (full RREF)."""
    order = sorted(pivots, reverse=True)
    for i, lead in enumerate(order):
        row = pivots[lead]
        for other in order[i + 1:]:
            orow = pivots[other]
            f = orow.get(lead)
            if f:
                for c, v in row.items():
                    nv = orow.get(c, ZERO) - f * v
                    if nv:
                        orow[c] = nv
                    else:
                        orow.pop(c, None)
    return pivots


def rref(M: SparseMatrix) -> dict:
    """Reduced row echelon form as ``{pivot_column: row_dict}``."""
    return _back_substitute(_echelon(M.row_dicts()))


def solve_linear(M: SparseMatrix, b: Sequence):
    """Exact solution of ``M x = b`` or ``None`` when inconsistent.

    Pivot columns are chosen leftmost first; free variables are set to zero,
    which makes the returned solution independent of elimination order.
    """
    if len(b) != M.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {M.rows} rows")
    aug = M.cols
    rows = M.row_dicts()
    for i, v in enumerate(b):
        v = scalar(v)
        if v:
            rows[i][aug] = v
    piv = _back_substitute(_echelon(rows))
    if aug in piv:
        return None
    x = [ZERO] * M.cols
    for lead, row in piv.items():
        x[lead] = row.get(aug, ZERO)
    return x


def solve_columns(columns: Sequence[Mapping], target: Mapping):
    """Solve ``sum_j x_j columns[j] = target`` for sparse columns over any keys.

    Keys of the column dictionaries may be arbitrary sortable objects (words
    of a tensor algebra, basis indices, ...).  Returns the list ``x`` or
    ``None``.
    """
    keys = sorted({k for col in columns for k in col} | set(target))
    index = {k: i for i, k in enumerate(keys)}
    entries = {}
    for j, col in enumerate(columns):
        for k, v in col.items():
            if v:
                entries[(index[k], j)] = v
    b = [ZERO] * len(keys)
    for k, v in target.items():
        b[index[k]] = scalar(v)
    return solve_linear(SparseMatrix(len(keys), len(columns), entries), b)


def kernel_basis(M: SparseMatrix) -> list[list]:
    """Basis of ``ker M``: one vector per free column, in column order."""
    piv = rref(M)
    free = [c for c in range(M.cols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * M.cols
        v[f] = ONE
        for lead, row in piv.items():
            c = row.get(f)
            if c:
                v[lead] = -c
        basis.append(v)
    return basis


def image_rank(columns: Sequence[Mapping]) -> int:
    return len(_echelon(columns))


class Span:
    """Incrementally grown subspace; used to pick vectors independent of a span."""

    def __init__(self, vectors: Iterable[Mapping] = ()):
        self._piv: dict = {}
        for v in vectors:
            self.add(v)

    def _reduce(self, v: Mapping) -> dict:
        r = {c: scalar(x) for c, x in v.items() if x}
        while r:
            lead = min(r)
            p = self._piv.get(lead)
            if p is None:
                return r
            f = r[lead]
            for c, x in p.items():
                nv = r.get(c, ZERO) - f * x
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        return r

    def contains(self, v: Mapping) -> bool:
        return not self._reduce(v)

    def add(self, v: Mapping) -> bool:
        r = self._reduce(v)
        if not r:
            return False
        lead = min(r)
        inv = ONE / r[lead]
        self._piv[lead] = {c: x * inv for c, x in r.items()}
        return True

    def __len__(self) -> int:
        return len(self._piv)


# -- chain complexes --------------------------------------------------------

@dataclass
class ChainComplexSlice:
    """Finite piece of a chain complex: ``boundaries[p]`` maps degree p to p-1."""

    dims: dict
    boundaries: dict = field(default_factory=dict)

    def dim(self, p: int) -> int:
        return self.dims.get(p, 0)

    def boundary(self, p: int) -> SparseMatrix:
        m = self.boundaries.get(p)
        if m is None:
            return SparseMatrix.zero(self.dim(p - 1), self.dim(p))
        if m.rows != self.dim(p - 1) or m.cols != self.dim(p):
            raise DimensionMismatch(
                f"boundary at degree {p} is {m.rows}x{m.cols}, expected "
                f"{self.dim(p - 1)}x{self.dim(p)}")
        return m

    def check_square_zero(self, degrees: Iterable[int]) -> None:
        for p in degrees:
            if self.dim(p) == 0 or self.dim(p - 2) == 0:
                continue
            if not (self.boundary(p - 1) @ self.boundary(p)).is_zero():
                raise BoundarySquareError(p)


@dataclass
class HomologyGroup:
    degree: int
    dimension: int
    representatives: list  # list of dense vectors in C_degree
    cycle_dim: int
    boundary_rank: int


def chain_homology(C: ChainComplexSlice, degrees: Iterable[int]) -> dict:
    """Homology of ``C`` in each requested degree, with representative cycles."""
    degrees = list(degrees)
    C.check_square_zero(range(min(degrees, default=0), max(degrees, default=0) + 2))
    out = {}
    for p in degrees:
        cycles = kernel_basis(C.boundary(p))
        bd = C.boundary(p + 1)
        span = Span(bd.column_dicts())
        brank = len(span)
        reps = []
        for z in cycles:
            zd = {i: v for i, v in enumerate(z) if v}
            if span.add(zd):
                reps.append(z)
        out[p] = HomologyGroup(p, len(cycles) - brank, reps, len(cycles), brank)
        assert len(reps) == len(cycles) - brank
    return out
