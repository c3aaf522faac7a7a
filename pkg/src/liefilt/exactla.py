"""Exact rational linear algebra kernel.

All scalars are `fractions.Fraction`, so rank and complementarity decisions
are exact.  Forward elimination is fraction-free (Bareiss) on
denominator-cleared integer rows to bound coefficient growth; kernel and
preimage solves back-substitute with exact fractions.

Every object is immutable after construction and every operation is pure.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce ints/strings/Fractions to Fraction; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact scalar, got {type(x).__name__}")


def vec(entries: Iterable) -> Vec:
    return tuple(frac(x) for x in entries)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c: Fraction, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


class Matrix:
    """Dense matrix of Fractions, row-major, immutable."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence], rows: Optional[int] = None, cols: Optional[int] = None):
        self.data: tuple[Vec, ...] = tuple(vec(r) for r in data)
        self.rows = len(self.data) if rows is None else rows
        if self.data:
            self.cols = len(self.data[0])
            if any(len(r) != self.cols for r in self.data):
                raise ValueError("ragged rows")
        else:
            self.cols = 0 if cols is None else cols
        if rows is not None and rows != len(self.data):
            raise ValueError("row count mismatch")

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        m = Matrix.__new__(Matrix)
        m.data = tuple((ZERO,) * cols for _ in range(rows))
        m.rows, m.cols = rows, cols
        return m

    @staticmethod
    def identity(n: int) -> "Matrix":
        m = Matrix.__new__(Matrix)
        m.data = tuple(unit_vec(n, i) for i in range(n))
        m.rows = m.cols = n
        return m

    @staticmethod
    def from_cols(cols: Sequence[Vec], ambient: Optional[int] = None) -> "Matrix":
        if not cols:
            return Matrix.zero(ambient or 0, 0)
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValueError("ragged columns")
        m = Matrix.__new__(Matrix)
        m.data = tuple(tuple(frac(c[i]) for c in cols) for i in range(n))
        m.rows, m.cols = n, len(cols)
        return m

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[Vec]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        m = Matrix.__new__(Matrix)
        m.data = tuple(self.col(j) for j in range(self.cols))
        m.rows, m.cols = self.cols, self.rows
        return m

    def mul_vec(self, v: Vec) -> Vec:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum((r[j] * v[j] for j in range(self.cols) if v[j]), ZERO) for r in self.data)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose()
        m = Matrix.__new__(Matrix)
        m.data = tuple(
            tuple(sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in ot.data)
            for row in self.data
        )
        m.rows, m.cols = self.rows, other.cols
        return m

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return Matrix([vec_add(a, b) for a, b in zip(self.data, other.data)], cols=self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return Matrix([vec_sub(a, b) for a, b in zip(self.data, other.data)], cols=self.cols)

    def scale(self, c) -> "Matrix":
        c = frac(c)
        return Matrix([vec_scale(c, r) for r in self.data], cols=self.cols)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("dimension mismatch")
        return Matrix([a + b for a, b in zip(self.data, other.data)], cols=self.cols + other.cols)

    def is_zero(self) -> bool:
        return all(is_zero_vec(r) for r in self.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


def _cleared_rows(m: Matrix, extra: Optional[Vec] = None) -> list[list[int]]:
    """Rows scaled to integers (per-row lcm of denominators); `extra` is
    appended as a last column and scaled jointly."""
    out = []
    for i, row in enumerate(m.data):
        full = row + ((extra[i],) if extra is not None else ())
        lcm = 1
        for x in full:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in full])
    return out


def _ff_echelon(rows: list[list[int]], pivot_cols_limit: int) -> list[int]:
    """In-place fraction-free (Bareiss) forward elimination.

    Pivots are chosen as the first nonzero entry scanning columns left to
    right (never beyond `pivot_cols_limit`) and rows top to bottom, which
    makes every downstream basis choice deterministic.  Returns the pivot
    column list.
    """
    nrows = len(rows)
    piv_cols: list[int] = []
    prev = 1
    r = 0
    for c in range(pivot_cols_limit):
        sel = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if sel is None:
            continue
        if sel != r:
            rows[r], rows[sel] = rows[sel], rows[r]
        ncols = len(rows[r])
        for i in range(r + 1, nrows):
            if rows[i][c] == 0:
                # Bareiss still rescales untouched rows; do it explicitly.
                factor = rows[r][c]
                rows[i] = [(factor * rows[i][cc]) // prev for cc in range(ncols)]
                continue
            piv, fac = rows[r][c], rows[i][c]
            rows[i] = [(piv * rows[i][cc] - fac * rows[r][cc]) // prev for cc in range(ncols)]
        prev = rows[r][c]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    return piv_cols


def _echelon(m: Matrix, extra: Optional[Vec] = None) -> tuple[list[list[int]], list[int]]:
    rows = _cleared_rows(m, extra)
    piv_cols = _ff_echelon(rows, m.cols)
    return rows, piv_cols


def rank(m: Matrix) -> int:
    """Rank, computed exactly by fraction-free elimination."""
    _, piv = _echelon(m)
    return len(piv)


def _back_substitute(rows: list[list[int]], piv_cols: list[int], ncols: int,
                     free_values: dict[int, Fraction], rhs_col: Optional[int] = None) -> Vec:
    """Solve the echelon system with the given free-variable assignment."""
    x = [ZERO] * ncols
    for c, v in free_values.items():
        x[c] = v
    for r in range(len(piv_cols) - 1, -1, -1):
        pc = piv_cols[r]
        row = rows[r]
        s = Fraction(row[rhs_col]) if rhs_col is not None else ZERO
        for c in range(pc + 1, ncols):
            if row[c] and x[c]:
                s -= row[c] * x[c]
        x[pc] = s / row[pc]
    return tuple(x)


class Subspace:
    """A linear subspace given by independent basis columns.

    Equality is span equality, never basis equality.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, basis: Matrix, check: bool = True):
        self.ambient_dim = basis.rows
        self.basis = basis
        if check and basis.cols and rank(basis) != basis.cols:
            raise ValueError("basis columns are linearly dependent")

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(Matrix.zero(ambient_dim, 0), check=False)

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(Matrix.identity(ambient_dim), check=False)

    @staticmethod
    def spanned_by(vectors: Sequence[Vec], ambient_dim: int) -> "Subspace":
        """Span of possibly dependent vectors (independent subset is kept)."""
        return image_basis(Matrix.from_cols(list(vectors), ambient=ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def contains_vector(self, v: Vec) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        if is_zero_vec(v):
            return True
        return solve_preimage(self.basis, v) is not None

    def contains(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("dimension mismatch")
        if other.dim == 0:
            return True
        return rank(self.basis.hstack(other.basis)) == self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and self.contains(other)
        )

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of {v : Mv = 0}; free variables iterate in column order."""
    rows, piv = _echelon(m)
    piv_set = set(piv)
    cols = []
    for f in range(m.cols):
        if f in piv_set:
            continue
        cols.append(_back_substitute(rows, piv, m.cols, {f: ONE}))
    return Subspace(Matrix.from_cols(cols, ambient=m.cols), check=False)


def image_basis(m: Matrix) -> Subspace:
    """Independent generating set for the column span (pivot columns of M)."""
    _, piv = _echelon(m)
    return Subspace(Matrix.from_cols([m.col(j) for j in piv], ambient=m.rows), check=False)


def solve_preimage(m: Matrix, b: Vec) -> Optional[Vec]:
    """Some x with Mx = b, free variables pinned to zero; None iff unsolvable."""
    if len(b) != m.rows:
        raise ValueError("dimension mismatch")
    rows, piv = _echelon(m, extra=vec(b))
    for r in range(len(piv), m.rows):
        if rows[r][m.cols] != 0:
            return None
    return _back_substitute(rows, piv, m.cols, {}, rhs_col=m.cols)


def complement(s: Subspace, t: Subspace) -> Subspace:
    """Deterministic complement of S inside T: extend S's basis by greedily
    adding T's basis columns in index order."""
    if s.ambient_dim != t.ambient_dim:
        raise ValueError("dimension mismatch")
    if not t.contains(s):
        raise ValueError("first subspace is not contained in the second")
    current = [s.basis.col(j) for j in range(s.dim)]
    chosen = []
    r = len(current)
    for j in range(t.dim):
        cand = t.basis.col(j)
        if rank(Matrix.from_cols(current + [cand], ambient=s.ambient_dim)) > r:
            current.append(cand)
            chosen.append(cand)
            r += 1
    return Subspace(Matrix.from_cols(chosen, ambient=s.ambient_dim), check=False)


def intersect(s: Subspace, t: Subspace) -> Subspace:
    """Basis of S ∩ T."""
    if s.ambient_dim != t.ambient_dim:
        raise ValueError("dimension mismatch")
    if s.dim == 0 or t.dim == 0:
        return Subspace.zero(s.ambient_dim)
    combined = s.basis.hstack(t.basis)
    ker = kernel_basis(combined)
    cols = []
    for j in range(ker.dim):
        coeffs = ker.basis.col(j)[: s.dim]
        cols.append(s.basis.mul_vec(coeffs))
    return image_basis(Matrix.from_cols(cols, ambient=s.ambient_dim))


def sum_spaces(s: Subspace, t: Subspace) -> Subspace:
    """Basis of S + T."""
    if s.ambient_dim != t.ambient_dim:
        raise ValueError("dimension mismatch")
    return image_basis(s.basis.hstack(t.basis))


def annihilator_rows(s: Subspace) -> Matrix:
    """A matrix R with ker(R) = span(S): rows cut out the subspace."""
    ker = kernel_basis(s.basis.transpose())
    return ker.basis.transpose()


def invert(m: Matrix) -> Matrix:
    """Exact inverse of a square invertible matrix."""
    if m.rows != m.cols:
        raise ValueError("not square")
    n = m.rows
    if all(m.data[i][j] == 0 for i in range(n) for j in range(n) if i != j):
        if any(m.data[i][i] == 0 for i in range(n)):
            raise ValueError("matrix is singular")
        return Matrix([[ONE / m.data[i][i] if i == j else ZERO for j in range(n)] for i in range(n)])
    aug = [list(m.data[i]) + list(unit_vec(n, i)) for i in range(n)]
    for c in range(n):
        sel = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if sel is None:
            raise ValueError("matrix is singular")
        if sel != c:
            aug[c], aug[sel] = aug[sel], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return Matrix([row[n:] for row in aug])
