"""Lie algebras given by structure constants.

A :class:`LieAlgebra` stores ``[e_i, e_j] = sum_k c_ij^k e_k`` for ``i < j``;
the diagonal is zero by construction, so alternation holds even in
characteristic 2. Basis indices are 0-based throughout the library.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import (
    AntisymmetryViolation,
    DimensionMismatch,
    FieldMismatch,
    JacobiViolation,
    NotAnIdeal,
    NotNilpotent,
)
from .field_linalg import QQ, FieldSpec, Matrix, Subspace, kernel, solve_rows


class LieAlgebra:
    """Validated structure-constant table. Build one with :func:`validate`."""

    def __init__(self, field: FieldSpec, dim: int, table: Mapping[tuple[int, int], tuple],
                 names: Sequence[str] | None = None):
        self.field = field
        self.dim = dim
        self.table = dict(table)
        self.names = tuple(names) if names is not None else tuple(f"x{i + 1}" for i in range(dim))

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, field={self.field!r}, nonzero_brackets={len(self.table)})"

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.field, self.dim, self.table) == (other.field, other.dim, other.table)

    def __hash__(self):
        return hash((self.field, self.dim, tuple(sorted(self.table))))

    @cached_property
    def ad_matrices(self) -> tuple[Matrix, ...]:
        """``ad(e_i)`` as n x n matrices acting on column vectors."""
        n, F = self.dim, self.field
        cols = [[[F.zero] * n for _ in range(n)] for _ in range(n)]  # cols[i][j] = [e_i, e_j]
        for (i, j), v in self.table.items():
            cols[i][j] = list(v)
            cols[j][i] = [-x for x in v]
        out = []
        for i in range(n):
            rows = [[cols[i][j][k] for j in range(n)] for k in range(n)]
            out.append(F.matrix(rows, n) if n else F.zeros(0, 0))
        return tuple(out)

    @cached_property
    def _ad_stack(self):
        """Row ``i`` holds ``ad(e_i)`` flattened, so ``u * stack`` is ``ad(u)`` flattened."""
        n, F = self.dim, self.field
        rows = [list(m.flint.entries()) for m in self.ad_matrices]
        return F.matrix(rows, n * n).flint if n else None

    def ad(self, u: Sequence) -> Matrix:
        """``ad(u)`` for an arbitrary coordinate vector ``u``."""
        if len(u) != self.dim:
            raise DimensionMismatch(f"vector of length {len(u)} in a {self.dim}-dimensional algebra")
        return self.ad_many([u])[0]

    def ad_many(self, vectors: Sequence[Sequence]) -> list[Matrix]:
        """``ad(u)`` for each ``u``, via one product with the stacked ad matrices."""
        n, F = self.dim, self.field
        if not vectors:
            return []
        if n == 0:
            return [F.zeros(0, 0) for _ in vectors]
        flat = (F.matrix(vectors, n).flint * self._ad_stack).entries()
        size = n * n
        return [Matrix(F, F._flint(n, n, flat[r * size:(r + 1) * size])) for r in range(len(vectors))]

    def bracket_basis(self, i: int, j: int) -> tuple:
        if i == j:
            return self.field.zero_vector(self.dim)
        if i < j:
            return self.table.get((i, j), self.field.zero_vector(self.dim))
        return tuple(-x for x in self.table.get((j, i), self.field.zero_vector(self.dim)))

    def basis_vector(self, i: int) -> tuple:
        return self.field.unit_vector(self.dim, i)

    def full(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def zero(self) -> Subspace:
        return Subspace.zero(self.field, self.dim)

    def span(self, vectors) -> Subspace:
        return Subspace.span(self.field, self.dim, vectors)

    def span_basis(self, indices) -> Subspace:
        return self.span([self.basis_vector(i) for i in indices])

    def structure_constants(self) -> list[list[list]]:
        """Dense ``c[i][j][k]`` including the lower triangle and diagonal."""
        return [[list(self.bracket_basis(i, j)) for j in range(self.dim)] for i in range(self.dim)]

    def reduce(self, field: FieldSpec) -> "LieAlgebra":
        """Same table read in another field (rationals reduced mod p)."""
        if field == self.field:
            return self
        if not self.field.is_rational:
            raise FieldMismatch(f"cannot move an algebra over {self.field!r} to {field!r}")
        table = {}
        for key, v in self.table.items():
            w = tuple(field.reduce(x) for x in v)
            if any(x != 0 for x in w):
                table[key] = w
        return validate(self.dim, table, field, self.names)

    # Cached series; each is a pure function of the immutable table.

    @cached_property
    def lower_central(self) -> "SeriesReport":
        return lower_central_series(self)

    @cached_property
    def upper_central(self) -> "SeriesReport":
        return upper_central_series(self)

    @cached_property
    def derived(self) -> Subspace:
        return product_subspace(self, self.full(), self.full())

    @cached_property
    def center(self) -> Subspace:
        return centralizer(self, self.full())


@dataclass(frozen=True)
class SeriesReport:
    terms: tuple[Subspace, ...]
    kind: str
    nilpotent: bool = True

    @property
    def dims(self) -> list[int]:
        return [t.dim for t in self.terms]

    def __getitem__(self, i: int) -> Subspace:
        return self.terms[i]

    def __len__(self):
        return len(self.terms)


def _normalize_table(dim: int, table, field: FieldSpec) -> dict[tuple[int, int], tuple]:
    out: dict[tuple[int, int], tuple] = {}
    for (i, j), v in table.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionMismatch(f"bracket index ({i},{j}) out of range for dim {dim}")
        if isinstance(v, Mapping):
            vec = [field.zero] * dim
            for k, c in v.items():
                vec[k] = vec[k] + field(c)
            vec = tuple(vec)
        else:
            if len(v) != dim:
                raise DimensionMismatch(f"bracket ({i},{j}) has a vector of length {len(v)}")
            vec = field.vector(v)
        nonzero = any(x != 0 for x in vec)
        if i == j:
            if nonzero:
                raise AntisymmetryViolation(f"[e{i + 1},e{i + 1}] must vanish")
            continue
        key, signed = ((i, j), vec) if i < j else ((j, i), tuple(-x for x in vec))
        if key in out and out[key] != signed:
            raise AntisymmetryViolation(
                f"[e{key[0] + 1},e{key[1] + 1}] and [e{key[1] + 1},e{key[0] + 1}] are not negatives")
        out[key] = signed
    return {k: v for k, v in out.items() if any(x != 0 for x in v)}


def jacobi_violations(L: LieAlgebra) -> list[tuple[int, int, int, tuple]]:
    """Every basis triple ``i<j<k`` whose Jacobi sum is nonzero, with the residual."""
    n, ads = L.dim, L.ad_matrices
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bad = []
    for (i, j), adb in zip(pairs, L.ad_many([L.bracket_basis(i, j) for i, j in pairs])):
        # column k of [ad_i, ad_j] - ad_[e_i,e_j] is the Jacobi residual on (i, j, k)
        m = ads[i].flint * ads[j].flint - ads[j].flint * ads[i].flint - adb.flint
        flat = m.entries()
        if not any(flat):
            continue
        for k in range(j + 1, n):
            col = tuple(flat[r * n + k] for r in range(n))
            if any(x != 0 for x in col):
                bad.append((i, j, k, col))
    return bad


def validate(dim: int, table=None, field: FieldSpec = QQ, names=None) -> LieAlgebra:
    """Build a :class:`LieAlgebra`, checking alternation and the Jacobi identity.

    ``table`` maps 0-based ``(i, j)`` to a dense vector or a sparse ``{k: coef}``.
    Pairs may be given in either order; both orders must agree up to sign.
    """
    if names is not None and len(names) != dim:
        raise DimensionMismatch(f"{len(names)} names for dimension {dim}")
    L = LieAlgebra(field, dim, _normalize_table(dim, table or {}, field), names)
    bad = jacobi_violations(L)
    if bad:
        raise JacobiViolation(bad)
    return L


def abelian(n: int, field: FieldSpec = QQ) -> LieAlgebra:
    return LieAlgebra(field, n, {})


def bracket(L: LieAlgebra, u: Sequence, v: Sequence) -> tuple:
    if len(u) != L.dim or len(v) != L.dim:
        raise DimensionMismatch(f"vectors must have length {L.dim}")
    return L.ad(u).apply(v)


def product_subspace(L: LieAlgebra, U: Subspace, W: Subspace) -> Subspace:
    """``[U, W]``: span of brackets of basis vectors of ``U`` and ``W``."""
    for S in (U, W):
        if S.ambient_dim != L.dim:
            raise DimensionMismatch(f"subspace of dimension {S.ambient_dim} in a {L.dim}-dim algebra")
    if not U.basis or not W.basis:
        return L.zero()
    n, F = L.dim, L.field
    # row (u, r), column w of the product is the r-th coordinate of [u, w]
    flat = (U.matrix.flint * L._ad_stack).entries()
    stacked = F._flint(U.dim * n, n, flat) * W.matrix.T.flint      # rows (u, r), columns w
    return Subspace.span(F, n, Matrix(F, _regroup(F, stacked, U.dim, n, W.dim)))


def _regroup(F: FieldSpec, stacked, k: int, n: int, l: int):
    """Turn rows ``(u, r)`` / columns ``w`` into rows ``(u, w)`` / columns ``r``."""
    flat = stacked.entries()
    out = [flat[(u * n + r) * l + w] for u in range(k) for w in range(l) for r in range(n)]
    return F._flint(k * l, n, out)


def centralizer(L: LieAlgebra, U: Subspace) -> Subspace:
    """``{x : [x, U] = 0}``."""
    if not U.basis:
        return L.full()
    n, F = L.dim, L.field
    # row-major entries of U * stack are the ad(u) matrices stacked vertically
    flat = (U.matrix.flint * L._ad_stack).entries()
    return kernel(Matrix(F, F._flint(U.dim * n, n, flat)))


def lower_central_series(L: LieAlgebra) -> SeriesReport:
    """``L^1 = L``, ``L^(i+1) = [L, L^i]`` until zero or stable.

    A nonzero stable term marks the input as not nilpotent; the partial
    series is still returned with ``nilpotent=False``.
    """
    terms = [L.full()]
    full = L.full()
    while terms[-1].dim > 0:
        nxt = product_subspace(L, full, terms[-1])
        if nxt == terms[-1]:
            return SeriesReport(tuple(terms), "lower_central", nilpotent=False)
        terms.append(nxt)
    return SeriesReport(tuple(terms), "lower_central", nilpotent=True)


def derived_subalgebra(L: LieAlgebra) -> Subspace:
    return L.derived


def upper_central_series(L: LieAlgebra) -> SeriesReport:
    """``Z_0 = 0`` and ``Z_(i+1) = {x : [x, L] ⊆ Z_i}`` until stable."""
    terms = [L.zero()]
    while True:
        q = terms[-1].quotient_map().flint
        rows = []
        for adj in L.ad_matrices:
            m = q * adj.flint
            rows.extend(tuple(m[r, c] for c in range(L.dim)) for r in range(m.nrows()))
        nxt = kernel(L.field.matrix(rows, L.dim)) if rows else L.full()
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    return SeriesReport(tuple(terms), "upper_central", nilpotent=terms[-1].dim == L.dim)


def center(L: LieAlgebra) -> Subspace:
    return L.center


def nilpotency_class(L: LieAlgebra) -> int:
    series = L.lower_central
    if not series.nilpotent:
        raise NotNilpotent(f"lower central series stabilizes at dimension {series.terms[-1].dim}")
    return len(series.terms) - 1


def lower_term(L: LieAlgebra, i: int) -> Subspace:
    """``L^i`` (1-based, zero past the end of the series)."""
    terms = L.lower_central.terms
    if i < 1:
        raise ValueError("lower central terms are indexed from 1")
    return terms[i - 1] if i <= len(terms) else L.zero()


def upper_term(L: LieAlgebra, i: int) -> Subspace:
    """``Z_i(L)`` (``Z_0 = 0``; constant past the end of the series)."""
    terms = L.upper_central.terms
    return terms[min(i, len(terms) - 1)]


def is_stem(L: LieAlgebra) -> bool:
    return L.center.issubspace(L.derived)


def is_ideal(L: LieAlgebra, U: Subspace) -> bool:
    return product_subspace(L, L.full(), U).issubspace(U)


def is_subalgebra(L: LieAlgebra, U: Subspace) -> bool:
    return product_subspace(L, U, U).issubspace(U)


def quotient(L: LieAlgebra, I: Subspace) -> tuple[LieAlgebra, Matrix]:
    """``L / I`` on the standard coordinates outside ``I``'s pivots, plus the projection."""
    if not is_ideal(L, I):
        raise NotAnIdeal("subspace is not an ideal")
    keep = I.complement_indices()
    proj = I.quotient_map()
    m = len(keep)
    table = {}
    for a in range(m):
        for b in range(a + 1, m):
            v = proj.apply(L.bracket_basis(keep[a], keep[b]))
            if any(x != 0 for x in v):
                table[(a, b)] = v
    Q = LieAlgebra(L.field, m, table, [L.names[k] for k in keep])
    return Q, proj


def restrict(L: LieAlgebra, basis: Sequence[Sequence], names=None) -> LieAlgebra:
    """Subalgebra spanned by the given independent vectors, in that basis order."""
    F = L.field
    k = len(basis)
    if k == 0:
        return LieAlgebra(F, 0, {})
    B = F.matrix(basis, L.dim)
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    if not pairs:
        return LieAlgebra(F, k, {}, names)
    bt = B.T.flint
    brackets = [Matrix(F, ad.flint * bt).T.rows for ad in L.ad_many(basis)]   # brackets[a][b] = [v_a, v_b]
    prods = F.matrix([brackets[a][b] for a, b in pairs], L.dim)
    try:
        coords = solve_rows(B, prods)
    except ValueError as exc:
        raise NotAnIdeal("vectors do not span a subalgebra") from exc
    table = {}
    for (a, b), row in zip(pairs, coords.rows):
        if any(x != 0 for x in row):
            table[(a, b)] = row
    return LieAlgebra(F, k, table, names)


def change_basis(L: LieAlgebra, P: Matrix) -> LieAlgebra:
    """Transport the bracket along ``x -> P x``; ``P`` becomes an isomorphism onto the result."""
    if P.field != L.field:
        raise FieldMismatch(f"{P.field!r} vs {L.field!r}")
    if P.shape != (L.dim, L.dim):
        raise DimensionMismatch(f"basis change of shape {P.shape} for dim {L.dim}")
    Q = P.inverse()
    qcols = Q.T.rows
    n = L.dim
    table = {}
    for a, ad_a in enumerate(L.ad_many(qcols)):
        img = (P.flint * ad_a.flint * Q.flint).entries()  # column b is P [Q e_a, Q e_b]
        for b in range(a + 1, n):
            v = tuple(img[r * n + b] for r in range(n))
            if any(x != 0 for x in v):
                table[(a, b)] = v
    return validate(n, table, L.field)


def direct_sum(L1: LieAlgebra, L2: LieAlgebra) -> LieAlgebra:
    if L1.field != L2.field:
        raise FieldMismatch(f"{L1.field!r} vs {L2.field!r}")
    n1, n = L1.dim, L1.dim + L2.dim
    z1, z2 = L1.field.zero_vector(L2.dim), L1.field.zero_vector(n1)
    table = {k: tuple(v) + z1 for k, v in L1.table.items()}
    table.update({(i + n1, j + n1): z2 + tuple(v) for (i, j), v in L2.table.items()})
    names = list(L1.names) + list(L2.names)
    if len(set(names)) != len(names):
        names = None
    return LieAlgebra(L1.field, n, table, names)


def is_isomorphism(L1: LieAlgebra, L2: LieAlgebra, P: Matrix) -> bool:
    """``P`` invertible with ``P [x, y] = [P x, P y]`` on all basis pairs."""
    if L1.dim != L2.dim:
        raise DimensionMismatch("algebras of different dimension")
    if P.shape != (L1.dim, L1.dim):
        raise DimensionMismatch(f"map of shape {P.shape} for dim {L1.dim}")
    if P.field != L1.field or P.field != L2.field:
        raise FieldMismatch("map and algebras over different fields")
    if not P.is_invertible():
        return False
    n = L1.dim
    pcols = P.T.rows
    for a in range(n):
        lhs = P.flint * L1.ad_matrices[a].flint          # column b: P [e_a, e_b]
        rhs = L2.ad(pcols[a]).flint * P.flint            # column b: [P e_a, P e_b]
        if lhs != rhs:
            return False
    return True
