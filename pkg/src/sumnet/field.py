"""Exact arithmetic in GF(p^k) and dense linear algebra over it.

Elements are polynomials over GF(p) reduced modulo a monic irreducible
polynomial of degree k. Internally every element is handled as its
canonical integer encoding ``sum(c_i * p**i)`` (coefficients low-degree
first), which is also the serialized form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

MAX_ORDER = 2**20
_TABLE_ORDER = 256  # build add/mul tables only for fields at most this big


class FieldMismatchError(ValueError):
    """Operands live in different fields."""


class SingularMatrixError(ArithmeticError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- polynomials over GF(p), low-degree-first coefficient lists ----------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _poly_trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _poly_trim(a)
    return a


def _poly_mod_general(a: list[int], b: list[int], p: int) -> list[int]:
    # b need not be monic
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    monic = [(c * inv_lead) % p for c in b]
    return _poly_mod(a, monic, p)


def is_irreducible(poly: tuple[int, ...] | list[int], p: int) -> bool:
    """Irreducibility of a polynomial over GF(p) by trial division.

    Tests for roots first, then divides by every monic polynomial of degree
    2..deg/2.
    """
    poly = _poly_trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for r in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * r + c) % p
        if acc == 0:
            return False
    for d in range(2, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod_general(poly, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible degree-k polynomial.

    Coefficient vectors are compared low-degree first, so for k == 1 this
    is ``x`` itself.
    """
    for low in itertools.product(range(p), repeat=k):
        cand = low + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


# -- fields and elements ---------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """The finite field GF(p^k) with a fixed modulus."""

    p: int
    k: int
    modulus: tuple[int, ...] = dc_field(repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise ValueError(f"extension degree must be >= 1, got {self.k}")
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if self.k > 1 and not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over GF({self.p})")

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def designation(self) -> str:
        return f"{self.p}^{self.k}"

    def __str__(self):
        return f"GF({self.order})"

    # integer-level arithmetic on canonical encodings

    def to_coeffs(self, value: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            value, c = divmod(value, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        value = 0
        for c in reversed(coeffs):
            value = value * self.p + c
        return value

    @cached_property
    def _tables(self):
        q = self.order
        if q > _TABLE_ORDER:
            return None
        add = [self._add_slow(a, b) for a in range(q) for b in range(q)]
        mul = [self._mul_slow(a, b) for a in range(q) for b in range(q)]
        return add, mul

    def _add_slow(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        return self.from_coeffs([(x + y) % self.p for x, y in zip(ca, cb)])

    def _mul_slow(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        red = _poly_mod(prod, list(self.modulus), self.p)
        return self.from_coeffs(red + [0] * (self.k - len(red)))

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        t = self._tables
        return t[0][a * self.order + b] if t else self._add_slow(a, b)

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        t = self._tables
        return t[1][a * self.order + b] if t else self._mul_slow(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.from_coeffs([(-c) % self.p for c in self.to_coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        # a^(q-2) by square-and-multiply
        result, base, e = 1, a, self.order - 2
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.order)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)


def field_make(p: int, k: int = 1, *, max_order: int = MAX_ORDER) -> FieldSpec:
    """Build GF(p^k) using the lexicographically smallest irreducible modulus."""
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"characteristic {p!r} is not prime")
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"extension degree must be a positive integer, got {k!r}")
    if p**k > max_order:
        raise ValueError(f"field order {p}^{k} exceeds bound {max_order}")
    return FieldSpec(p, k, smallest_irreducible(p, k))


def parse_field(text: str) -> FieldSpec:
    """Parse a ``"p^k"`` designation such as ``"2^2"``."""
    head, sep, tail = text.strip().partition("^")
    try:
        p = int(head)
        k = int(tail) if sep else 1
    except ValueError:
        raise ValueError(f"bad field designation {text!r}, expected p^k") from None
    return field_make(p, k)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.order:
            raise ValueError(f"{self.value} is not an element of {self.field}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.to_coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            # integers act as multiples of the identity
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(b)))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field}({self.value})"


def _check_same(a: FieldElement, b: FieldElement) -> None:
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a + b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a * b


def fe_neg(a: FieldElement) -> FieldElement:
    return -a


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


# -- matrices --------------------------------------------------------------


@dataclass(frozen=True)
class FieldMatrix:
    """Dense matrix over a FieldSpec, entries stored row-major as encodings."""

    field: FieldSpec
    rows: int
    cols: int
    data: tuple[int, ...] = dc_field(repr=False)

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.data) != self.rows * self.cols:
            raise ValueError("data length does not match shape")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> FieldMatrix:
        rows = [[int(v) for v in row] for row in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged or empty matrix")
        q = field.order
        flat = tuple(v for row in rows for v in row)
        if any(not 0 <= v < q for v in flat):
            raise ValueError(f"entry out of range for {field}")
        return cls(field, len(rows), len(rows[0]), flat)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> FieldMatrix:
        return cls(field, n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int | None = None) -> FieldMatrix:
        cols = rows if cols is None else cols
        return cls(field, rows, cols, (0,) * (rows * cols))

    @classmethod
    def scalar(cls, field: FieldSpec, n: int, value: int) -> FieldMatrix:
        """``value`` times the n x n identity."""
        return cls(field, n, n, tuple(value if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, field: FieldSpec, values) -> FieldMatrix:
        return cls.from_rows(field, [[v] for v in values])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, self.data[i * self.cols + j])

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.data[i * c:(i + 1) * c]) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.data)

    def _same_field(self, other: FieldMatrix) -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        self._same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        add = self.field.add
        return FieldMatrix(self.field, self.rows, self.cols,
                           tuple(add(a, b) for a, b in zip(self.data, other.data)))

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        n, m, r = self.rows, self.cols, other.cols
        a, b = self.data, other.data
        if n == m == r == 1:
            return FieldMatrix(f, 1, 1, (f.mul(a[0], b[0]),))
        add, mul = f.add, f.mul
        out = []
        for i in range(n):
            row = a[i * m:(i + 1) * m]
            for j in range(r):
                acc = 0
                for t, x in enumerate(row):
                    if x:
                        y = b[t * r + j]
                        if y:
                            acc = add(acc, mul(x, y))
                out.append(acc)
        return FieldMatrix(f, n, r, tuple(out))

    def scale(self, value: int) -> FieldMatrix:
        mul = self.field.mul
        return FieldMatrix(self.field, self.rows, self.cols, tuple(mul(value, v) for v in self.data))

    def transpose(self) -> FieldMatrix:
        r, c = self.rows, self.cols
        return FieldMatrix(self.field, c, r, tuple(self.data[i * c + j] for j in range(c) for i in range(r)))

    def rank(self) -> int:
        rows = self.to_rows()
        return len(_row_reduce(self.field, rows, self.cols))

    def inverse(self) -> FieldMatrix:
        return mat_inv(self)


def _row_reduce(field: FieldSpec, rows: list[list[int]], ncols: int) -> list[int]:
    """Reduce ``rows`` in place to reduced row echelon form.

    Only the first ``ncols`` columns are used for pivoting; extra columns are
    carried along (augmented systems). Pivot is the first nonzero entry at or
    below the current row. Returns the pivot column of each leading row.
    """
    add, mul, neg, inv = field.add, field.mul, field.neg, field.inv
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        if lead != 1:
            s = inv(lead)
            rows[r] = [mul(s, v) for v in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            f = rows[i][c]
            if i != r and f:
                nf = neg(f)
                rows[i] = [add(x, mul(nf, y)) if y else x for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def mat_mul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    return a @ b


def mat_inv(a: FieldMatrix) -> FieldMatrix:
    if a.rows != a.cols:
        raise ValueError(f"cannot invert non-square {a.shape} matrix")
    n = a.rows
    rows = [row + [int(i == j) for j in range(n)] for i, row in enumerate(a.to_rows())]
    pivots = _row_reduce(a.field, rows, n)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix has rank {len(pivots)} < {n}")
    return FieldMatrix.from_rows(a.field, [row[n:] for row in rows])


@dataclass(frozen=True)
class LinearSolution:
    """One solution ``x`` of ``A x = b`` plus the solution-space description."""

    x: FieldMatrix
    rank: int
    nullspace: tuple[FieldMatrix, ...]

    @property
    def dimension(self) -> int:
        return len(self.nullspace)


def solve_linear(a: FieldMatrix, b: FieldMatrix) -> LinearSolution | None:
    """Solve ``A x = b`` by Gaussian elimination; ``None`` if inconsistent.

    The particular solution sets every free variable to zero.
    """
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if b.rows != a.rows:
        raise ValueError(f"A has {a.rows} rows but b has {b.rows}")
    n = a.cols
    rows = [ra + rb for ra, rb in zip(a.to_rows(), b.to_rows())]
    pivots = _row_reduce(a.field, rows, n)
    rank = len(pivots)
    if any(any(row[n:]) for row in rows[rank:]):
        return None
    f = a.field
    extra = b.cols
    x = [[0] * extra for _ in range(n)]
    for r, c in enumerate(pivots):
        x[c] = rows[r][n:]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for r, c in enumerate(pivots):
            v[c] = f.neg(rows[r][fc])
        basis.append(FieldMatrix.column(f, v))
    return LinearSolution(FieldMatrix.from_rows(f, x), rank, tuple(basis))


def is_consistent(field: FieldSpec, rows: list[list[int]], ncols: int) -> bool:
    """Whether the augmented integer system ``rows`` (last column = rhs) has a solution.

    Works on a copy; used on hot paths where building FieldMatrix objects
    would dominate.
    """
    rows = [list(r) for r in rows]
    rank = len(_row_reduce(field, rows, ncols))
    return not any(row[ncols] for row in rows[rank:])
