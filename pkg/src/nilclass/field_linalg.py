"""Exact linear algebra over the rationals and prime fields.

Scalars are ``flint.fmpq`` (rationals) or ``flint.nmod`` (residues mod p);
matrices wrap the matching flint matrix type. Everything here is immutable
by convention: no function mutates its arguments.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import BadPrime, DimensionMismatch, FieldMismatch, SingularMatrix

__all__ = [
    "FieldSpec", "QQ", "GF", "Matrix", "Subspace", "SubspaceOps",
    "rref", "kernel", "subspace_ops", "subspace_sum", "subspace_intersection",
    "solve_rows", "random_invertible",
]


_ZERO: dict = {}


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field GF(p)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or self.p < 2 or not flint.fmpz(self.p).is_prime():
                raise ValueError(f"{self.p!r} is not a prime")

    @property
    def kind(self) -> str:
        return "rationals" if self.p is None else "prime"

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def descriptor(self) -> str:
        return "q" if self.p is None else f"gf:{self.p}"

    @classmethod
    def from_descriptor(cls, text: str) -> "FieldSpec":
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return QQ
        if text.startswith("gf:"):
            try:
                return cls(int(text[3:]))
            except ValueError as exc:
                raise ValueError(f"bad field descriptor {text!r}") from exc
        raise ValueError(f"bad field descriptor {text!r}")

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    # -- scalars -----------------------------------------------------------

    @property
    def zero(self):
        return _ZERO[self.p] if self.p in _ZERO else _ZERO.setdefault(self.p, self(0))

    @property
    def one(self):
        return self(1)

    def __call__(self, x):
        """Coerce an int, Fraction, decimal/fraction string or own scalar."""
        if self.p is None:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, flint.nmod):
                raise FieldMismatch(f"residue {x} mod {x.modulus()} used over QQ")
            if isinstance(x, (int, flint.fmpz)):
                return flint.fmpq(x)
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, str):
                return self.parse(x)
            raise TypeError(f"cannot coerce {x!r} to a rational")
        if isinstance(x, flint.nmod):
            if x.modulus() != self.p:
                raise FieldMismatch(f"residue mod {x.modulus()} used over GF({self.p})")
            return x
        if isinstance(x, flint.fmpq):
            raise FieldMismatch(f"rational {x} used over GF({self.p}); use reduce()")
        if isinstance(x, (int, flint.fmpz)):
            return flint.nmod(int(x), self.p)
        if isinstance(x, Fraction):
            return self.reduce(flint.fmpq(x.numerator, x.denominator))
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} to GF({self.p})")

    def reduce(self, q):
        """Map a rational into this field (identity over QQ)."""
        if self.p is None:
            return self(q)
        q = flint.fmpq(q) if not isinstance(q, flint.fmpq) else q
        num, den = int(q.p), int(q.q)
        if den % self.p == 0:
            raise BadPrime(f"{self.p} divides the denominator of {q}")
        return flint.nmod(num, self.p) / flint.nmod(den, self.p)

    def parse(self, text: str):
        text = text.strip()
        try:
            value = Fraction(text)
        except ValueError as exc:
            raise ValueError(f"bad scalar literal {text!r}") from exc
        if self.p is None:
            return flint.fmpq(value.numerator, value.denominator)
        return self.reduce(flint.fmpq(value.numerator, value.denominator))

    def format(self, x) -> str:
        """Serialize a scalar: ``"a/b"`` or ``"a"`` over QQ, a residue over GF(p)."""
        return str(self(x))

    def random_scalar(self, rng, bound: int = 3):
        if self.p is None:
            return flint.fmpq(rng.randint(-bound, bound))
        return flint.nmod(rng.randrange(self.p), self.p)

    # -- vectors and matrices ---------------------------------------------

    def vector(self, values: Iterable) -> tuple:
        return tuple(self(v) for v in values)

    def zero_vector(self, n: int) -> tuple:
        z = self.zero
        return (z,) * n

    def unit_vector(self, n: int, i: int) -> tuple:
        v = [self.zero] * n
        v[i] = self.one
        return tuple(v)

    def matrix(self, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty row list")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
        native = (int, flint.fmpq) if self.p is None else (int, flint.nmod)
        entries = [x if type(x) in native else self(x) for r in rows for x in r]
        try:
            return Matrix(self, self._flint(len(rows), ncols, entries))
        except ValueError as exc:
            raise FieldMismatch(str(exc)) from None

    def identity(self, n: int) -> "Matrix":
        return self.matrix([self.unit_vector(n, i) for i in range(n)], n)

    def zeros(self, nrows: int, ncols: int) -> "Matrix":
        return Matrix(self, self._flint(nrows, ncols, []))

    def _flint(self, nrows, ncols, entries):
        if self.p is None:
            if entries:
                return flint.fmpq_mat(nrows, ncols, entries)
            return flint.fmpq_mat(nrows, ncols)
        if entries:
            return flint.nmod_mat(nrows, ncols, entries, self.p)
        return flint.nmod_mat(nrows, ncols, self.p)


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


class Matrix:
    """Dense matrix over a :class:`FieldSpec`; treat as immutable."""

    __slots__ = ("field", "_m", "_rows")

    def __init__(self, field: FieldSpec, m):
        self.field = field
        self._m = m
        self._rows = None

    @property
    def flint(self):
        return self._m

    @property
    def nrows(self) -> int:
        return self._m.nrows()

    @property
    def ncols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple, ...]:
        if self._rows is None:
            m, c = self._m, self.ncols
            flat = m.entries()
            self._rows = tuple(tuple(flat[i * c:(i + 1) * c]) for i in range(self.nrows))
        return self._rows

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def column(self, j: int) -> tuple:
        return tuple(self._m[i, j] for i in range(self.nrows))

    def __getitem__(self, ij):
        return self._m[ij]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.field, self.shape, tuple(str(x) for r in self.rows for x in r)))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols}, [{body}])"

    def _check(self, other: "Matrix"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.field, self._m * other._m)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.field, self._m + other._m)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(self.field, self._m - other._m)

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, self.field(c) * self._m)

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector ``v``."""
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        col = self.field._flint(self.ncols, 1, [self.field(x) for x in v]) if v else self.field.zeros(0, 1)._m
        out = self._m * col
        return tuple(out[i, 0] for i in range(self.nrows))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self._m.transpose())

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def det(self):
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of a non-square matrix")
        if self.nrows == 0:
            return self.field.one
        return self._m.det()

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "Matrix":
        if not self.is_invertible():
            raise SingularMatrix(f"{self.shape} matrix is not invertible")
        if self.nrows == 0:
            return self
        return Matrix(self.field, self._m.inv())

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        return self._m.rank()

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.ncols:
            raise DimensionMismatch("column counts differ")
        return self.field.matrix(self.rows + other.rows, self.ncols)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)


def _pivots(rows: tuple[tuple, ...]) -> list[int]:
    pivots = []
    for r in rows:
        for j, x in enumerate(r):
            if x != 0:
                pivots.append(j)
                break
    return pivots


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns.

    The returned matrix keeps the input shape; zero rows sit at the bottom.
    """
    if m.nrows == 0 or m.ncols == 0:
        return m, 0, []
    r, rank = m.flint.rref()
    out = Matrix(m.field, r)
    pivots = _pivots(out.rows[:rank])
    return out, rank, pivots


def _rref_top(m: Matrix) -> tuple[tuple[tuple, ...], int, list[int]]:
    """Nonzero rows of the reduced row-echelon form, rank and pivots."""
    if m.nrows == 0 or m.ncols == 0:
        return (), 0, []
    r, rank = m.flint.rref()
    c = m.ncols
    if rank * 4 < m.nrows:
        top = tuple(tuple(r[i, j] for j in range(c)) for i in range(rank))
    else:
        flat = r.entries()
        top = tuple(tuple(flat[i * c:(i + 1) * c]) for i in range(rank))
    return top, rank, _pivots(top)


def kernel(m: Matrix) -> "Subspace":
    """Right null space ``{x : m x = 0}`` as a subspace of ``field^ncols``."""
    field, n = m.field, m.ncols
    rows, rank, pivots = _rref_top(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = [field.zero] * n
        v[f] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        basis.append(v)
    ker = Subspace.span(field, n, basis)
    assert ker.dim + rank == n, "rank-nullity violated"
    return ker


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``field^ambient_dim`` stored as a canonical RREF basis."""

    field: FieldSpec
    ambient_dim: int
    basis: tuple[tuple, ...]
    pivots: tuple[int, ...] = dc_field(default=())

    @classmethod
    def span(cls, field: FieldSpec, ambient_dim: int, vectors) -> "Subspace":
        if isinstance(vectors, Matrix):
            if vectors.field != field:
                raise FieldMismatch(f"{vectors.field!r} vs {field!r}")
            mat = vectors
        else:
            vectors = list(vectors)
            mat = field.matrix(vectors, ambient_dim) if vectors else field.zeros(0, ambient_dim)
        if mat.ncols != ambient_dim:
            raise DimensionMismatch(f"vectors of length {mat.ncols} in ambient dimension {ambient_dim}")
        top, rank, pivots = _rref_top(mat)
        return cls(field, ambient_dim, top, tuple(pivots))

    @classmethod
    def zero(cls, field: FieldSpec, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field: FieldSpec, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, field.identity(ambient_dim).rows, tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> Matrix:
        if not self.basis:
            return self.field.zeros(0, self.ambient_dim)
        return self.field.matrix(self.basis, self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field, self.ambient_dim, self.basis) == (other.field, other.ambient_dim, other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient_dim, tuple(str(x) for r in self.basis for x in r)))

    def __repr__(self):
        vecs = ", ".join("(" + ",".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(dim={self.dim}/{self.ambient_dim}, [{vecs}])"

    def _same(self, other: "Subspace"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(f"ambient dims {self.ambient_dim} and {other.ambient_dim}")

    def residual(self, v: Sequence) -> list:
        """``v`` minus its reduction against the basis (zero iff ``v`` lies in the span)."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        w = [self.field(x) for x in v]
        for row, pc in zip(self.basis, self.pivots):
            c = w[pc]
            if c != 0:
                for j in range(pc, self.ambient_dim):
                    if row[j] != 0:
                        w[j] -= c * row[j]
        return w

    def contains(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.residual(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v: Sequence) -> tuple:
        """Coefficients of ``v`` in the stored basis; ``ValueError`` if ``v`` is outside."""
        w = [self.field(x) for x in v]
        coords = tuple(w[pc] for pc in self.pivots)
        if not self.contains(w):
            raise ValueError("vector not in subspace")
        return coords

    def issubspace(self, other: "Subspace") -> bool:
        self._same(other)
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersection(self, other)

    def complement_indices(self) -> list[int]:
        """Standard coordinates not among the pivots, in increasing order."""
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def extend_within(self, other: "Subspace") -> list[tuple]:
        """Rows of ``other.basis`` that, added in order to ``self``, stay independent.

        They span a complement of ``self`` inside ``self + other``.
        """
        self._same(other)
        picked = []
        current = self
        for b in other.basis:
            if not current.contains(b):
                picked.append(b)
                current = Subspace.span(self.field, self.ambient_dim, current.basis + (b,))
        return picked

    def standard_complement(self) -> list[tuple]:
        """Standard unit vectors completing ``self`` to the whole space, greedily in index order."""
        full = Subspace.full(self.field, self.ambient_dim)
        return self.extend_within(full)

    def quotient_map(self) -> Matrix:
        """Projection ``field^n -> field^n / self`` in complement-index coordinates.

        Row ``c`` reads off coordinate ``c`` of the reduced residual, for each
        non-pivot index ``c`` in increasing order.
        """
        field, n = self.field, self.ambient_dim
        rows = []
        for c in self.complement_indices():
            r = [field.zero] * n
            r[c] = field.one
            for b, pc in zip(self.basis, self.pivots):
                if b[c] != 0:
                    r[pc] = -b[c]
            rows.append(r)
        return field.matrix(rows, n) if rows else field.zeros(0, n)


@dataclass(frozen=True)
class SubspaceOps:
    sum: Subspace
    intersection: Subspace

    def contains(self, v) -> tuple[bool, bool]:
        """Membership of ``v`` in (sum, intersection)."""
        return self.sum.contains(v), self.intersection.contains(v)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    a._same(b)
    return Subspace.span(a.field, a.ambient_dim, a.basis + b.basis)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    return subspace_ops(a, b).intersection


def subspace_ops(a: Subspace, b: Subspace) -> SubspaceOps:
    """Sum and intersection by the Zassenhaus block elimination."""
    a._same(b)
    field, n = a.field, a.ambient_dim
    z = field.zero_vector(n)
    rows = [r + r for r in a.basis] + [r + z for r in b.basis]
    if not rows:
        zero = Subspace.zero(field, n)
        return SubspaceOps(zero, zero)
    red, rank, pivots = rref(field.matrix(rows, 2 * n))
    sum_rows, int_rows = [], []
    for r, pc in zip(red.rows[:rank], pivots):
        (sum_rows if pc < n else int_rows).append(r[:n] if pc < n else r[n:])
    total = Subspace.span(field, n, sum_rows)
    meet = Subspace.span(field, n, int_rows)
    assert total.dim + meet.dim == a.dim + b.dim, "modular dimension law violated"
    return SubspaceOps(total, meet)


def solve_rows(basis: Matrix, targets: Matrix) -> Matrix:
    """Coefficients ``X`` with ``X @ basis == targets`` for independent ``basis`` rows.

    Raises ``ValueError`` when some target row is outside the row span.
    """
    if basis.field != targets.field:
        raise FieldMismatch(f"{basis.field!r} vs {targets.field!r}")
    if basis.ncols != targets.ncols:
        raise DimensionMismatch("basis and targets have different widths")
    field, k, m = basis.field, basis.nrows, targets.nrows
    if m == 0:
        return field.zeros(0, k)
    if k == 0:
        if not targets.is_zero():
            raise ValueError("target outside the row span")
        return field.zeros(m, 0)
    aug = field.matrix([br + tr for br, tr in zip(basis.T.rows, targets.T.rows)], k + m)
    red, rank, pivots = rref(aug)
    if any(p >= k for p in pivots):
        raise ValueError("target outside the row span")
    if rank < k:
        raise ValueError("basis rows are dependent")
    rows = red.rows
    return field.matrix([[rows[i][k + t] for i in range(k)] for t in range(m)], k)


def random_invertible(F: FieldSpec, n: int, rng) -> Matrix:
    """A seeded random invertible matrix for basis-change tests.

    Over GF(p): uniform entries, redrawn until nonsingular. Over QQ: a product
    of ``3n`` elementary row operations with small integer multipliers, so
    the matrix is unimodular and coordinates stay small.
    """
    if n == 0:
        return F.zeros(0, 0)
    if F.p is not None:
        while True:
            M = F.matrix([[rng.randrange(F.p) for _ in range(n)] for _ in range(n)], n)
            if M.is_invertible():
                return M
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    if n > 1:
        for _ in range(3 * n):
            i, j = rng.sample(range(n), 2)
            c = rng.choice((-2, -1, 1, 2))
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return F.matrix(M, n)
