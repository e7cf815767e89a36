"""Composite algebras: semidirect sums, central products and the two splittings
(Heisenberg blocks, stem part plus abelian summand)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DimensionMismatch, FieldMismatch, InvalidAction, NotCentral, NotHeisenberg, ParamOutOfRange
from .field_linalg import QQ, FieldSpec, Matrix, Subspace, subspace_intersection
from .lie_core import (
    LieAlgebra,
    abelian,
    bracket,
    direct_sum,
    is_ideal,
    nilpotency_class,
    product_subspace,
    quotient,
    restrict,
    validate,
)


def standard(kind: str, param: int, field: FieldSpec = QQ) -> LieAlgebra:
    """``heisenberg`` H(m) on ``a1, b1, ..., am, bm, z`` or ``abelian`` A(n)."""
    if kind == "abelian":
        if param < 0:
            raise ParamOutOfRange("A(n) needs n >= 0")
        return abelian(param, field)
    if kind == "heisenberg":
        if param < 1:
            raise ParamOutOfRange("H(m) needs m >= 1")
        n = 2 * param + 1
        names = [s for l in range(1, param + 1) for s in (f"a{l}", f"b{l}")] + ["z"]
        table = {(2 * l, 2 * l + 1): {n - 1: 1} for l in range(param)}
        return validate(n, table, field, names)
    raise ValueError(f"unknown standard algebra {kind!r}")


def heisenberg(m: int, field: FieldSpec = QQ) -> LieAlgebra:
    return standard("heisenberg", m, field)


# -- semidirect sums ----------------------------------------------------------

ActionSpec = Mapping[tuple[int, int], Sequence]
"""``(k, i) -> [k_k, i_i]`` as a vector in ``I``; unlisted pairs act by zero."""


def _derivation_matrix(I: LieAlgebra, images: dict[int, tuple]) -> Matrix:
    F, n = I.field, I.dim
    cols = [images.get(i, F.zero_vector(n)) for i in range(n)]
    return F.matrix([[cols[j][r] for j in range(n)] for r in range(n)], n) if n else F.zeros(0, 0)


def is_derivation(I: LieAlgebra, D: Matrix) -> bool:
    """``D [x, y] = [D x, y] + [x, D y]`` on all basis pairs."""
    n = I.dim
    dcols = D.T.rows
    for a in range(n):
        # column b: D [e_a, e_b] - [D e_a, e_b] - [e_a, D e_b]
        lhs = D.flint * I.ad_matrices[a].flint - I.ad(dcols[a]).flint - I.ad_matrices[a].flint * D.flint
        if any(lhs[r, c] != 0 for r in range(n) for c in range(n)):
            return False
    return True


def semidirect_sum(I: LieAlgebra, K: LieAlgebra, action: ActionSpec) -> LieAlgebra:
    """``K ⋉ I`` on the basis of ``I`` followed by the basis of ``K``."""
    if I.field != K.field:
        raise FieldMismatch(f"{I.field!r} vs {K.field!r}")
    F, ni, nk = I.field, I.dim, K.dim
    per_k: dict[int, dict[int, tuple]] = {}
    for (k, i), v in action.items():
        if not (0 <= k < nk and 0 <= i < ni):
            raise DimensionMismatch(f"action index ({k},{i}) out of range")
        if len(v) != ni:
            raise DimensionMismatch("action values must be vectors in I")
        per_k.setdefault(k, {})[i] = F.vector(v)
    for k, images in per_k.items():
        if not is_derivation(I, _derivation_matrix(I, images)):
            raise InvalidAction(f"K basis vector {k + 1} does not act by a derivation of I")
    n = ni + nk
    zk, zi = F.zero_vector(nk), F.zero_vector(ni)
    table: dict[tuple[int, int], tuple] = {key: tuple(v) + zk for key, v in I.table.items()}
    table.update({(a + ni, b + ni): zi + tuple(v) for (a, b), v in K.table.items()})
    for k, images in per_k.items():
        for i, v in images.items():
            # [e_i, k] = -[k, e_i]
            table[(i, ni + k)] = tuple(-x for x in v) + zk
    names = list(I.names) + list(K.names)
    return validate(n, table, F, names if len(set(names)) == n else None)


# -- central products ---------------------------------------------------------

@dataclass(frozen=True)
class CentralIdentification:
    """Identify ``a_vectors[r]`` in A with ``sum_s correspondence[r, s] * b_vectors[s]`` in B."""

    a_vectors: tuple[tuple, ...]
    b_vectors: tuple[tuple, ...]
    correspondence: Matrix | None = None

    @classmethod
    def pairs(cls, A: LieAlgebra, B: LieAlgebra, pairs: Sequence[tuple[int, int]]):
        """Identify basis vectors ``A.e_i`` with ``B.e_j`` for each ``(i, j)``."""
        return cls(tuple(A.basis_vector(i) for i, _ in pairs),
                   tuple(B.basis_vector(j) for _, j in pairs))


def _central_product_parts(A: LieAlgebra, B: LieAlgebra, ident: CentralIdentification):
    if A.field != B.field:
        raise FieldMismatch(f"{A.field!r} vs {B.field!r}")
    F = A.field
    k = len(ident.a_vectors)
    if len(ident.b_vectors) != k:
        raise DimensionMismatch("identified subspaces differ in dimension")
    corr = ident.correspondence or F.identity(k)
    if corr.shape != (k, k) or not corr.is_invertible():
        raise DimensionMismatch("correspondence must be an invertible square matrix")
    a_sub = A.span(ident.a_vectors)
    b_sub = B.span(ident.b_vectors)
    if a_sub.dim != k or b_sub.dim != k:
        raise DimensionMismatch("identified vectors must be independent")
    if not a_sub.issubspace(A.center) or not b_sub.issubspace(B.center):
        raise NotCentral("identified subspaces must be central")
    S = direct_sum(A, B)
    na = A.dim
    zb, za = F.zero_vector(B.dim), F.zero_vector(na)
    graph = []
    b_images = corr.flint * F.matrix(ident.b_vectors, B.dim).flint if k else None
    for r, a in enumerate(ident.a_vectors):
        phi = tuple(b_images[r, c] for c in range(B.dim))
        graph.append(tuple(a) + tuple(-x for x in phi))
    G = S.span(graph)
    L, proj = quotient(S, G)
    a_img = L.span([proj.apply(tuple(F.unit_vector(na, i)) + zb) for i in range(na)])
    b_img = L.span([proj.apply(za + tuple(F.unit_vector(B.dim, j))) for j in range(B.dim)])
    # the defining properties, checked on every build
    assert is_ideal(L, a_img) and is_ideal(L, b_img)
    assert product_subspace(L, a_img, b_img).dim == 0
    assert subspace_intersection(a_img, b_img).issubspace(L.center)
    assert (a_img + b_img).dim == L.dim
    return L, a_img, b_img


def central_product(A: LieAlgebra, B: LieAlgebra, ident: CentralIdentification) -> LieAlgebra:
    """``A ∔ B``: direct sum modulo the graph of the identification."""
    return _central_product_parts(A, B, ident)[0]


def central_product_parts(A: LieAlgebra, B: LieAlgebra, ident: CentralIdentification):
    """Like :func:`central_product`, also returning the images of ``A`` and ``B``."""
    return _central_product_parts(A, B, ident)


# -- Heisenberg splitting -----------------------------------------------------

def heisenberg_decompose(L: LieAlgebra) -> list[Subspace]:
    """Split ``L ≅ H(m)`` into ``m`` three-dimensional Heisenberg ideals.

    Works on the alternating form ``L/Z x L/Z -> Z`` by greedy extraction of
    hyperbolic pairs in coordinate order.
    """
    Z, D = L.center, L.derived
    if L.dim % 2 == 0 or D.dim != 1 or Z != D:
        raise NotHeisenberg("need odd dimension and Z(L) = [L,L] of dimension 1")
    z = Z.basis[0]

    def form(x, y):
        return Z.coordinates(bracket(L, x, y))[0]

    pending = [list(v) for v in Z.standard_complement()]
    blocks = []
    while pending:
        u = pending.pop(0)
        for idx, v in enumerate(pending):
            w = form(u, v)
            if w != 0:
                v = [x / w for x in pending.pop(idx)]
                break
        else:
            raise NotHeisenberg("degenerate commutator form")
        for idx, w in enumerate(pending):
            cu, cv = form(w, u), form(w, v)
            pending[idx] = [wi - cv * ui + cu * vi for wi, ui, vi in zip(w, u, v)]
        blocks.append(L.span([u, v, z]))
        assert restrict(L, [u, v, z]).table == {(0, 1): L.field.vector((0, 0, 1))}
    return blocks


# -- stem decomposition -------------------------------------------------------

@dataclass(frozen=True)
class StemDecomposition:
    stem: LieAlgebra
    abelian_rank: int
    stem_basis: tuple[tuple, ...]     # rows in L-coordinates
    abelian_basis: tuple[tuple, ...]

    @property
    def T(self) -> LieAlgebra:
        return self.stem

    def change_of_basis(self) -> Matrix:
        """Columns: stem basis then abelian basis, in L-coordinates."""
        rows = self.stem_basis + self.abelian_basis
        F = self.stem.field
        n = len(rows)
        return F.matrix([[rows[j][i] for j in range(n)] for i in range(n)], n)


def stem_decompose(L: LieAlgebra) -> StemDecomposition:
    """``L = T ⊕ A`` with ``A`` central abelian, ``A ∩ L² = 0`` and ``T ⊇ L²`` stem.

    ``A`` takes the basis vectors of ``Z(L)`` not already in ``L² ∩ Z(L)``
    (greedy, in basis order); ``T`` adds standard unit vectors to ``L²`` and
    is written in its reduced echelon basis, so a stem ``L`` comes back as is.
    """
    nilpotency_class(L)
    Z, D = L.center, L.derived
    W = subspace_intersection(D, Z)
    a_basis = W.extend_within(Z)
    base = Subspace.span(L.field, L.dim, D.basis + tuple(a_basis))
    extra = base.standard_complement()
    t_basis = Subspace.span(L.field, L.dim, tuple(D.basis) + tuple(extra)).basis
    T = restrict(L, t_basis)
    return StemDecomposition(T, len(a_basis), tuple(tuple(v) for v in t_basis), tuple(tuple(v) for v in a_basis))


# -- named builds used as fixtures -----------------------------------------------

def with_heisenberg(A: LieAlgebra, m: int):
    """``A ∔ H(m)`` amalgamating the one-dimensional center of ``A`` with ``z``.

    Returns ``(L, image of A, image of H(m))``.
    """
    H = heisenberg(m, A.field)
    ident = CentralIdentification(A.center.basis, (H.basis_vector(H.dim - 1),))
    return central_product_parts(A, H, ident)


def central_product_builds(max_m: int = 3):
    """Every central product the catalog families are made of, built from factors.

    Yields ``(label, m, L, A_image, B_image)`` where ``label`` names the catalog
    family ``L`` should be isomorphic to (``m`` is ``None`` for fixed entries).
    """
    from .presentations import catalog

    F = QQ
    base = {lab: catalog(lab) for lab in ("L5_6", "L5_7", "L6_11", "L6_12", "L6_13", "T_n")}
    yield ("H", 2, *central_product_parts(heisenberg(1, F), heisenberg(1, F),
                                           CentralIdentification.pairs(heisenberg(1), heisenberg(1), [(2, 2)])))
    yield ("T_e", None, *with_heisenberg(base["L5_6"], 1))
    yield ("T_f", None, *with_heisenberg(base["L5_7"], 1))
    yield ("T_p", None, *with_heisenberg(base["L6_13"], 1))
    for m in range(1, max_m + 1):
        if m >= 2:
            yield ("T_g", m, *with_heisenberg(base["L5_6"], m))
            yield ("T_h", m, *with_heisenberg(base["L5_7"], m))
            yield ("T_q", m, *with_heisenberg(base["L6_13"], m))
        yield ("T_k", m, *with_heisenberg(base["L6_11"], m))
        yield ("T_l", m, *with_heisenberg(base["L6_12"], m))
        yield ("T_r", m, *with_heisenberg(base["T_n"], m))
