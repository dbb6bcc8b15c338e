"""Dense exact matrices and vectors over a :mod:`leonard24.field` field.

Rows and columns are indexed from 0.  Matrices and vectors are immutable
values (entries are stored as tuples).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from .field import Field, FieldMismatchError, QQ, RationalField

__all__ = [
    "DimensionError",
    "InconsistentSystemError",
    "Matrix",
    "Vector",
    "Solution",
    "row_reduce",
    "rank",
    "bareiss_rank",
    "nullspace",
    "solve",
    "inverse",
    "determinant",
    "charpoly",
    "poly_eval",
    "expand_roots",
    "is_basis",
    "trace",
]


class DimensionError(ValueError):
    pass


class InconsistentSystemError(ValueError):
    pass


def _check_field(f: Field, g: Field) -> None:
    if f != g:
        raise FieldMismatchError(f"field mismatch: {f!r} vs {g!r}")


class Vector:
    __slots__ = ("entries", "field")

    def __init__(self, entries: Iterable, field: Field):
        self.entries = tuple(x if field.contains(x) else field(x) for x in entries)
        self.field = field

    @classmethod
    def _raw(cls, entries: tuple, field: Field) -> "Vector":
        v = cls.__new__(cls)
        v.entries = entries
        v.field = field
        return v

    @classmethod
    def basis_vector(cls, n: int, k: int, field: Field) -> "Vector":
        return cls._raw(tuple(field.one if i == k else field.zero for i in range(n)), field)

    @classmethod
    def zeros(cls, n: int, field: Field) -> "Vector":
        return cls._raw((field.zero,) * n, field)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __add__(self, other: "Vector") -> "Vector":
        self._compat(other)
        return Vector._raw(tuple(a + b for a, b in zip(self.entries, other.entries)), self.field)

    def __sub__(self, other: "Vector") -> "Vector":
        self._compat(other)
        return Vector._raw(tuple(a - b for a, b in zip(self.entries, other.entries)), self.field)

    def __neg__(self):
        return Vector._raw(tuple(-a for a in self.entries), self.field)

    def scale(self, c) -> "Vector":
        c = self.field(c)
        return Vector._raw(tuple(c * a for a in self.entries), self.field)

    def __rmul__(self, c):
        return self.scale(c)

    def dot(self, other: "Vector"):
        self._compat(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), self.field.zero)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _compat(self, other: "Vector") -> None:
        _check_field(self.field, other.field)
        if len(self) != len(other):
            raise DimensionError(f"vector lengths {len(self)} and {len(other)} differ")

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.field == other.field and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"Vector([{', '.join(self.field.format(x) for x in self.entries)}])"


class Matrix:
    """A rows x cols matrix of field elements."""

    __slots__ = ("rows", "nrows", "ncols", "field")

    def __init__(self, rows: Iterable[Iterable], field: Field = QQ):
        rows = [tuple(r) for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError("ragged rows")
        self.rows = tuple(
            r if all(field.contains(x) for x in r) else tuple(field(x) for x in r)
            for r in rows
        )
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        self.field = field

    @classmethod
    def _raw(cls, rows: tuple, field: Field, ncols: Optional[int] = None) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0]) if rows else (ncols or 0)
        m.field = field
        return m

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        one, zero = field.one, field.zero
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), field)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "Matrix":
        return cls._raw(tuple((field.zero,) * ncols for _ in range(nrows)), field, ncols)

    @classmethod
    def diagonal(cls, diag: Sequence, field: Field = QQ) -> "Matrix":
        n = len(diag)
        zero = field.zero
        return cls._raw(tuple(tuple(field(diag[i]) if i == j else zero for j in range(n))
                              for i in range(n)), field)

    @classmethod
    def from_columns(cls, columns: Sequence[Vector]) -> "Matrix":
        if not columns:
            raise DimensionError("no columns")
        field = columns[0].field
        n = len(columns[0])
        for c in columns:
            _check_field(field, c.field)
            if len(c) != n:
                raise DimensionError("columns of unequal length")
        return cls._raw(tuple(tuple(c.entries[i] for c in columns) for i in range(n)), field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return Vector._raw(tuple(r[j] for r in self.rows), self.field)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.rows)) if self.rows else (), self.field, self.nrows)

    def _same_shape(self, other: "Matrix") -> None:
        _check_field(self.field, other.field)
        if self.shape != other.shape:
            raise DimensionError(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.field)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.field)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.field)

    def __mul__(self, c):
        if isinstance(c, (Matrix, Vector)):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Vector):
            _check_field(self.field, other.field)
            if self.ncols != len(other):
                raise DimensionError(f"cannot apply {self.shape} matrix to length-{len(other)} vector")
            v = other.entries
            zero = self.field.zero
            return Vector._raw(tuple(sum((a * b for a, b in zip(r, v) if a and b), zero)
                                     for r in self.rows), self.field)
        if not isinstance(other, Matrix):
            return NotImplemented
        _check_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.field.zero
        cols = tuple(zip(*other.rows)) if other.rows else ()
        if not cols:
            return Matrix.zeros(self.nrows, other.ncols, self.field)
        return Matrix._raw(
            tuple(tuple(sum((a * b for a, b in zip(r, c) if a and b), zero) for c in cols)
                  for r in self.rows),
            self.field,
            other.ncols,
        )

    def __pow__(self, n: int) -> "Matrix":
        if not self.is_square() or n < 0:
            raise DimensionError("power of a non-square matrix or negative exponent")
        result = Matrix.identity(self.nrows, self.field)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def trace(self):
        return trace(self)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.rows)
        return f"Matrix([{body}])"

    def to_strings(self):
        return [[self.field.format(x) for x in r] for r in self.rows]


def trace(X: Matrix):
    if not X.is_square():
        raise DimensionError(f"trace of non-square {X.shape} matrix")
    return sum((X.rows[i][i] for i in range(X.nrows)), X.field.zero)


# -- elimination -------------------------------------------------------------

def row_reduce(M: Matrix):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot column of each
    nonzero row.  The pivot in each column is the first nonzero entry at or
    below the current row, so results are deterministic.
    """
    rows = [list(r) for r in M.rows]
    nr, nc = M.nrows, M.ncols
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c] if isinstance(M.field, RationalField) else rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        pivot_row = rows[r]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return Matrix._raw(tuple(tuple(x) for x in rows), M.field, nc), pivots


def rank(M: Matrix) -> int:
    if isinstance(M.field, RationalField):
        return bareiss_rank(M)
    return len(row_reduce(M)[1])


def _integer_rows(M: Matrix):
    out = []
    for r in M.rows:
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


def bareiss_rank(M: Matrix) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination.

    Each row is first scaled to integers; all intermediate values then stay
    integral and bounded by minors of the scaled matrix.
    """
    if not isinstance(M.field, RationalField):
        raise FieldMismatchError("Bareiss elimination here is for rational matrices")
    a = _integer_rows(M)
    nr, nc = M.nrows, M.ncols
    prev = 1
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nr):
            f = a[i][c]
            a[i] = [(piv * x - f * y) // prev for x, y in zip(a[i], a[r])]
            a[i][c] = 0
        prev = piv
        r += 1
    return r


def determinant(M: Matrix):
    if not M.is_square():
        raise DimensionError("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return M.field.one
    if isinstance(M.field, RationalField):
        a = _integer_rows(M)
        scale = Fraction(1)
        for r in M.rows:
            scale *= lcm(*(x.denominator for x in r))
        sign = 1
        prev = 1
        for k in range(n - 1):
            p = next((i for i in range(k, n) if a[i][k]), None)
            if p is None:
                return Fraction(0)
            if p != k:
                a[k], a[p] = a[p], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return Fraction(sign * a[n - 1][n - 1]) / scale
    rows = [list(r) for r in M.rows]
    det = M.field.one
    for k in range(n):
        p = next((i for i in range(k, n) if rows[i][k]), None)
        if p is None:
            return M.field.zero
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
            det = -det
        det = det * rows[k][k]
        inv = rows[k][k].inverse()
        for i in range(k + 1, n):
            f = rows[i][k] * inv
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[k])]
    return det


def nullspace(M: Matrix) -> list:
    """Basis of {x : M x = 0}, one vector per free column (free entry = 1)."""
    R, pivots = row_reduce(M)
    field = M.field
    free = [c for c in range(M.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [field.zero] * M.ncols
        x[f] = field.one
        for i, pc in enumerate(pivots):
            x[pc] = -R.rows[i][f]
        basis.append(Vector._raw(tuple(x), field))
    return basis


@dataclass(frozen=True)
class Solution:
    """Solution set ``particular + span(nullspace)``; ``particular`` is a
    Vector or a Matrix matching the right-hand side."""

    particular: object
    nullspace: list
    rank: int


def solve(M: Matrix, b) -> Solution:
    """Solve ``M x = b`` for a vector or matrix right-hand side.

    Raises :class:`InconsistentSystemError` when no solution exists.
    """
    if isinstance(b, Vector):
        B = Matrix.from_columns([b])
    elif isinstance(b, Matrix):
        B = b
    else:
        raise TypeError("right-hand side must be a Vector or Matrix")
    _check_field(M.field, B.field)
    if B.nrows != M.nrows:
        raise DimensionError(f"right-hand side has {B.nrows} rows, expected {M.nrows}")
    aug = Matrix._raw(tuple(r + s for r, s in zip(M.rows, B.rows)), M.field)
    R, pivots = row_reduce(aug)
    n = M.ncols
    if any(p >= n for p in pivots):
        raise InconsistentSystemError("system has no solution")
    field = M.field
    X = [[field.zero] * B.ncols for _ in range(n)]
    for i, pc in enumerate(pivots):
        X[pc] = list(R.rows[i][n:])
    ns = nullspace(M)
    if isinstance(b, Vector):
        part = Vector._raw(tuple(row[0] for row in X), field)
    else:
        part = Matrix._raw(tuple(tuple(row) for row in X), field, B.ncols)
    return Solution(part, ns, len(pivots))


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise DimensionError("inverse of a non-square matrix")
    n = M.nrows
    I = Matrix.identity(n, M.field)
    aug = Matrix._raw(tuple(r + s for r, s in zip(M.rows, I.rows)), M.field)
    R, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return Matrix._raw(tuple(r[n:] for r in R.rows), M.field)


# -- polynomials -------------------------------------------------------------

def charpoly(M: Matrix) -> list:
    """Coefficients ``[c_0, ..., c_n]`` of det(xI - M), lowest degree first.

    Berkowitz's division-free algorithm, valid over any commutative ring.
    """
    if not M.is_square():
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = M.nrows
    field = M.field
    zero, one = field.zero, field.one
    if n == 0:
        return [one]
    a = M.rows
    # Coefficients highest degree first, for the leading principal submatrix.
    vect = [one, -a[0][0]]
    for r in range(1, n):
        R = [a[i][r] for i in range(r)]       # column above the diagonal
        C = [a[r][j] for j in range(r)]       # row left of the diagonal
        A_r = [list(a[i][:r]) for i in range(r)]
        # Toeplitz column: 1, -a_rr, -C R, -C A R, -C A^2 R, ...
        col = [one, -a[r][r]]
        X = R
        for _ in range(r):
            col.append(-sum((c * x for c, x in zip(C, X)), zero))
            X = [sum((A_r[i][j] * X[j] for j in range(r)), zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            new.append(sum((col[i - k] * vect[k] for k in range(len(vect)) if 0 <= i - k < len(col)), zero))
        vect = new
    return list(reversed(vect))


def expand_roots(roots: Sequence, field: Field) -> list:
    """Coefficients (lowest degree first) of the monic product of (x - r)."""
    coeffs = [field.one]
    for r in roots:
        new = [field.zero] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k + 1] += c
            new[k] -= r * c
        coeffs = new
    return coeffs


def poly_eval(X: Matrix, *, roots: Optional[Sequence] = None,
              coeffs: Optional[Sequence] = None) -> Matrix:
    """Evaluate a polynomial at a square matrix.

    With ``roots=[r_0, ..., r_{k-1}]`` returns (X - r_0 I)...(X - r_{k-1} I)
    (the identity for an empty list).  With ``coeffs`` (lowest degree first)
    uses Horner's rule.
    """
    if not X.is_square():
        raise DimensionError("polynomial of a non-square matrix")
    if (roots is None) == (coeffs is None):
        raise ValueError("give exactly one of roots= or coeffs=")
    n = X.nrows
    field = X.field
    I = Matrix.identity(n, field)
    if roots is not None:
        result = I
        for r in roots:
            if isinstance(r, int):
                r = field(r)
            elif not field.contains(r):
                raise FieldMismatchError(f"root {r!r} not in {field!r}")
            result = result @ (X - I.scale(r))
        return result
    result = Matrix.zeros(n, n, field)
    for c in reversed(list(coeffs)):
        if not field.contains(c):
            raise FieldMismatchError(f"coefficient {c!r} not in {field!r}")
        result = result @ X + I.scale(c)
    return result


def is_basis(vectors: Sequence[Vector]) -> bool:
    """True iff the vectors form a basis of K^n (n = number of vectors)."""
    if not vectors:
        return False
    n = len(vectors)
    for v in vectors:
        if len(v) != n:
            raise DimensionError(f"expected {n} vectors of length {n}")
    return rank(Matrix.from_columns(vectors)) == n
