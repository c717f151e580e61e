"""Exact scalars and dense matrices over the rationals and prime fields.

Rational entries are Python ``int`` or ``fractions.Fraction`` (both compare and
hash consistently); prime-field entries are ``int`` residues in ``[0, p)``.
Nothing in this module ever touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class LinalgError(Exception):
    code = "linalg"


class DivisionByZero(LinalgError, ZeroDivisionError):
    code = "division_by_zero"


class DimensionMismatch(LinalgError, ValueError):
    code = "dimension_mismatch"


class SingularMatrix(LinalgError, ValueError):
    code = "singular_matrix"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Either the rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"F_{self.p}: {self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __repr__(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    # scalar arithmetic -----------------------------------------------------

    def __call__(self, x) -> Scalar:
        """Coerce an int, Fraction or ``"a/b"`` string into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p == 0:
            if isinstance(x, Fraction) and x.denominator == 1:
                return x.numerator
            return x
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return x % self.p

    def inv(self, x: Scalar) -> Scalar:
        if x == 0:
            raise DivisionByZero(f"inverse of zero in {self!r}")
        if self.p == 0:
            if isinstance(x, int):
                return x if x in (1, -1) else Fraction(1, x)
            r = 1 / x
            return r.numerator if r.denominator == 1 else r
        return pow(x, -1, self.p)

    def div(self, x: Scalar, y: Scalar) -> Scalar:
        return self.mul(x, self.inv(y))

    def add(self, x: Scalar, y: Scalar) -> Scalar:
        return x + y if self.p == 0 else (x + y) % self.p

    def sub(self, x: Scalar, y: Scalar) -> Scalar:
        return x - y if self.p == 0 else (x - y) % self.p

    def mul(self, x: Scalar, y: Scalar) -> Scalar:
        return x * y if self.p == 0 else (x * y) % self.p

    def neg(self, x: Scalar) -> Scalar:
        return -x if self.p == 0 else (-x) % self.p

    def is_invertible(self, n: int) -> bool:
        """Whether the integer ``n`` is a unit in this field."""
        return n != 0 if self.p == 0 else n % self.p != 0

    # serialization ---------------------------------------------------------

    def format(self, x: Scalar) -> str:
        if self.p:
            return str(x)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def to_json(self):
        return "Q" if self.p == 0 else {"Fp": self.p}

    @classmethod
    def from_json(cls, obj) -> "Field":
        if obj == "Q":
            return QQ
        if isinstance(obj, dict) and "Fp" in obj:
            return cls(int(obj["Fp"]))
        raise ValueError(f"unrecognised field descriptor {obj!r}")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse the CLI spelling ``q`` or ``fp:P``."""
        t = text.strip().lower()
        if t in ("q", "qq", "rationals"):
            return QQ
        if t.startswith("fp:"):
            return cls(int(t[3:]))
        raise ValueError(f"bad field {text!r}; expected 'q' or 'fp:P'")


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def scalar_inverse(s: Scalar, field: Field = QQ) -> Scalar:
    return field.inv(field(s))


class Matrix:
    """Immutable dense matrix; 0xn and nx0 shapes are allowed."""

    __slots__ = ("field", "rows", "cols", "_data", "_hash", "_nz", "_frac")

    def __init__(self, field: Field, rows: int, cols: int, data: Sequence[Sequence[Scalar]]):
        self.field = field
        self.rows = rows
        self.cols = cols
        if field.p == 0:
            # keep integral rationals as ints so later arithmetic stays on the fast path
            self._data = tuple(tuple(x.numerator if x.__class__ is Fraction and x.denominator == 1 else x
                                     for x in r) for r in data)
        else:
            self._data = tuple(tuple(r) for r in data)
        self._hash = self._nz = self._frac = None
        if len(self._data) != rows or any(len(r) != cols for r in self._data):
            raise DimensionMismatch(f"entries do not form a {rows}x{cols} table")

    @classmethod
    def _trusted(cls, field: Field, rows: int, cols: int, data: tuple) -> "Matrix":
        """Internal constructor for already-normalized tuple-of-tuples data."""
        m = object.__new__(cls)
        m.field, m.rows, m.cols, m._data = field, rows, cols, data
        m._hash = m._nz = m._frac = None
        return m

    def _sparse_rows(self) -> list:
        """Per row, the list of (column, value) for nonzero entries (cached)."""
        if self._nz is None:
            self._nz = [[(j, x) for j, x in enumerate(r) if x] for r in self._data]
        return self._nz

    def _has_fractions(self) -> bool:
        if self._frac is None:
            self._frac = self.field.p == 0 and any(Fraction in set(map(type, r)) for r in self._data)
        return self._frac

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [[field(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, rows)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, field: Field, n: int, s: Scalar) -> "Matrix":
        s = field(s)
        return cls(field, n, n, [[s if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, field: Field, perm: Sequence[int]) -> "Matrix":
        """Matrix sending basis vector ``j`` to basis vector ``perm[j]``."""
        n = len(perm)
        data = [[0] * n for _ in range(n)]
        for j, i in enumerate(perm):
            data[i][j] = 1
        return cls(field, n, n, data)

    # basic access ----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple[tuple[Scalar, ...], ...]:
        return self._data

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.rows == other.rows
                and self.cols == other.cols and self._data == other._data)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self._data)
        return f"Matrix<{self.field!r} {self.rows}x{self.cols}>[{body}]"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.field, self.rows)

    # arithmetic ------------------------------------------------------------

    def _check_field(self, other: "Matrix"):
        if self.field != other.field:
            raise DimensionMismatch(f"field mismatch {self.field!r} vs {other.field!r}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        add = self.field.add
        return Matrix(self.field, self.rows, self.cols,
                      [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols, [[neg(a) for a in r] for r in self._data])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, s: Scalar) -> "Matrix":
        s = self.field(s)
        mul = self.field.mul
        return Matrix(self.field, self.rows, self.cols, [[mul(s, a) for a in r] for r in self._data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.p
        n = other.cols
        b = other._sparse_rows()
        ints = not p and not (self._has_fractions() or other._has_fractions())
        out = []
        for r in self._sparse_rows():
            acc = [0] * n
            for k, a in r:
                for j, x in b[k]:
                    acc[j] += a * x
            if p:
                out.append(tuple([x % p for x in acc]))
            elif ints:
                out.append(tuple(acc))
            else:
                out.append(tuple([x.numerator if x.__class__ is Fraction and x.denominator == 1 else x
                                  for x in acc]))
        m = Matrix._trusted(self.field, self.rows, n, tuple(out))
        if ints or p:
            m._frac = False
        return m

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, list(zip(*self._data)) if self.rows else
                      [[] for _ in range(self.cols)])

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of a non-square matrix")
        t = 0
        for i in range(self.rows):
            t = self.field.add(t, self._data[i][i])
        return t

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix(self.field, len(rows), len(cols), [[self._data[i][j] for j in cols] for i in rows])

    # echelon forms ---------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form (leftmost pivots) and the pivot columns."""
        F = self.field
        m = [list(r) for r in self._data]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            piv = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = F.inv(m[r][c])
            m[r] = [F.mul(inv, x) for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return Matrix(F, self.rows, self.cols, m), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise SingularMatrix(f"non-square {self.shape} matrix has no inverse")
        n = self.rows
        aug = hstack(self, Matrix.identity(self.field, n))
        red, piv = aug.rref()
        if n and piv[:n] != tuple(range(n)):
            raise SingularMatrix("matrix is singular")
        return red.submatrix(range(n), range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def hstack(*ms: Matrix) -> Matrix:
    F = ms[0].field
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise DimensionMismatch("hstack of matrices with different row counts")
    return Matrix(F, rows, sum(m.cols for m in ms),
                  [sum((m.row(i) for m in ms), ()) for i in range(rows)])


def vstack(*ms: Matrix, cols: int | None = None) -> Matrix:
    if not ms:
        raise ValueError("vstack needs at least one matrix")
    F = ms[0].field
    cols = ms[0].cols if cols is None else cols
    if any(m.cols != cols for m in ms):
        raise DimensionMismatch("vstack of matrices with different column counts")
    return Matrix(F, sum(m.rows for m in ms), cols, [r for m in ms for r in m.entries])


def block_diag(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.entries):
            data[r0 + i][c0:c0 + b.cols] = row
        r0 += b.rows
        c0 += b.cols
    return Matrix(field, rows, cols, data)


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with a-index major, b-index minor."""
    if a.field != b.field:
        raise DimensionMismatch(f"field mismatch {a.field!r} vs {b.field!r}")
    F = a.field
    mul = F.mul
    data = []
    for ra in a.entries:
        for rb in b.entries:
            data.append([mul(x, y) for x in ra for y in rb])
    return Matrix(F, a.rows * b.rows, a.cols * b.cols, data)


def commutation_matrix(field: Field, m: int, n: int) -> Matrix:
    """The swap k^m (x) k^n -> k^n (x) k^m, i.e. K @ kron(u, v) = kron(v, u)."""
    perm = [0] * (m * n)
    for i in range(m):
        for j in range(n):
            perm[i * n + j] = j * m + i
    return Matrix.permutation(field, perm)


def kernel_basis(m: Matrix) -> Matrix:
    """Canonical kernel basis (one column per free variable of the RREF)."""
    return kernel_basis_with_coordinates(m)[0]


def kernel_basis_with_coordinates(m: Matrix) -> tuple[Matrix, Matrix]:
    """The canonical kernel basis B and the coordinate map C with C @ B = I.

    B has an identity block on the free columns, so C just reads those rows.
    """
    red, piv = m.rref()
    pset = set(piv)
    free = [j for j in range(m.cols) if j not in pset]
    data = [[0] * len(free) for _ in range(m.cols)]
    for k, j in enumerate(free):
        data[j][k] = 1
        for r, pc in enumerate(piv):
            data[pc][k] = m.field.neg(red[r, j])
    coords = [[1 if i == j else 0 for i in range(m.cols)] for j in free]
    return Matrix(m.field, m.cols, len(free), data), Matrix(m.field, len(free), m.cols, coords)


def image_basis(m: Matrix) -> Matrix:
    """Columns of ``m`` at the pivot positions (a basis of the column space)."""
    _, piv = m.rref()
    return m.submatrix(range(m.rows), piv)


def quotient_basis(ambient_dim: int, subspace: Matrix) -> tuple[Matrix, Matrix]:
    """Projection onto, and section of, ``k^n / span(columns of subspace)``.

    The complement is spanned by the standard basis vectors at the non-pivot
    columns of the RREF of ``subspace^T``; ``projection @ section == I``.
    """
    F = subspace.field
    if subspace.rows != ambient_dim:
        raise DimensionMismatch(f"subspace has {subspace.rows} rows, ambient is {ambient_dim}")
    red, piv = subspace.transpose().rref()
    free = [j for j in range(ambient_dim) if j not in piv]
    proj = []
    for j in free:
        row = [0] * ambient_dim
        row[j] = 1
        for r, pc in enumerate(piv):
            row[pc] = F.neg(red[r, j])
        proj.append(row)
    section = [[1 if i == j else 0 for j in free] for i in range(ambient_dim)]
    return (Matrix(F, len(free), ambient_dim, proj),
            Matrix(F, ambient_dim, len(free), section))


def left_inverse(b: Matrix) -> Matrix:
    """A left inverse of a full-column-rank matrix, selecting independent rows."""
    _, piv = b.transpose().rref()
    if len(piv) != b.cols:
        raise SingularMatrix("matrix does not have full column rank")
    sq = b.submatrix(piv, range(b.cols)).inverse()
    data = [[0] * b.rows for _ in range(b.cols)]
    for i in range(b.cols):
        for k, r in enumerate(piv):
            data[i][r] = sq[i, k]
    return Matrix(b.field, b.cols, b.rows, data)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some X with a @ X == b, or None if the system is inconsistent."""
    red, piv = hstack(a, b).rref()
    if any(p >= a.cols for p in piv):
        return None
    data = [[0] * b.cols for _ in range(a.cols)]
    for r, pc in enumerate(piv):
        data[pc] = list(red.row(r)[a.cols:])
    return Matrix(a.field, a.cols, b.cols, data)


def scalar_multiple(a: Matrix, b: Matrix) -> Scalar | None:
    """The scalar c with a == c * b, if one exists (b nonzero)."""
    if a.shape != b.shape or b.is_zero():
        return None
    F = a.field
    c = None
    for ra, rb in zip(a.entries, b.entries):
        for x, y in zip(ra, rb):
            if y != 0:
                c = F.div(x, y)
                break
        if c is not None:
            break
    return c if b.scale(c) == a else None


def matrix_to_json(m: Matrix) -> dict:
    fmt = m.field.format
    return {"field": m.field.to_json(), "rows": m.rows, "cols": m.cols,
            "entries": [[fmt(x) for x in r] for r in m.entries]}


def matrix_from_json(obj: dict) -> Matrix:
    F = Field.from_json(obj["field"])
    return Matrix(F, obj["rows"], obj["cols"], [[F(x) for x in r] for r in obj["entries"]])
