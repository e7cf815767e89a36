"""Nonabelian exterior square, exterior center and the Schur multiplier.

``L ∧ L`` is the alternating square modulo the span of
``[x,y]∧z - x∧[y,z] + y∧[x,z]`` over basis triples; its kernel onto ``L²``
is the multiplier. The multiplier dimension is computed a second way, as
Chevalley-Eilenberg ``H_2(L)``, and the two must agree.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import RouteMismatch
from .field_linalg import Matrix, Subspace, kernel
from .lie_core import LieAlgebra


def pair_index(n: int) -> dict[tuple[int, int], int]:
    """Position of ``e_i ∧ e_j`` (``i < j``) in the alternating-square basis."""
    return {(i, j): k for k, (i, j) in enumerate((i, j) for i in range(n) for j in range(i + 1, n))}


def _add_wedge_unit(acc: dict, idx, v, k: int, sign):
    """``acc += sign * (v ∧ e_k)``."""
    for l, c in enumerate(v):
        if c == 0 or l == k:
            continue
        if l < k:
            key, s = idx[(l, k)], sign
        else:
            key, s = idx[(k, l)], -sign
        acc[key] = acc.get(key, 0) + s * c


def _dense(acc: dict, size: int, zero):
    row = [zero] * size
    for k, c in acc.items():
        row[k] = row[k] + c
    return row


@dataclass(frozen=True)
class ExteriorSquareModel:
    algebra: LieAlgebra
    relation_span: Subspace
    quotient_map: Matrix          # alternating square -> L ∧ L coordinates

    @property
    def ambient_dim(self) -> int:
        return self.relation_span.ambient_dim

    @property
    def quotient_dim(self) -> int:
        return self.ambient_dim - self.relation_span.dim

    def wedge(self, x, y) -> tuple:
        """``x ∧ y`` in the alternating-square coordinates."""
        n = self.algebra.dim
        idx = pair_index(n)
        F = self.algebra.field
        row = [F.zero] * self.ambient_dim
        for (i, j), k in idx.items():
            c = F(x[i]) * F(y[j]) - F(x[j]) * F(y[i])
            if c != 0:
                row[k] = c
        return tuple(row)

    def eval(self, x, y) -> tuple:
        """Coordinates of ``x ∧ y`` in ``L ∧ L``."""
        return self.quotient_map.apply(self.wedge(x, y))


def _bracket_matrix(L: LieAlgebra) -> Matrix:
    """``d_2``: column ``(i,j)`` is ``[e_i, e_j]``."""
    n, F = L.dim, L.field
    idx = pair_index(n)
    cols = [F.zero_vector(n)] * len(idx)
    for key, v in L.table.items():
        cols[idx[key]] = v
    if not cols:
        return F.zeros(n, 0)
    return F.matrix([[c[r] for c in cols] for r in range(n)], len(cols))


def exterior_square(L: LieAlgebra, check: bool = True) -> ExteriorSquareModel:
    n, F = L.dim, L.field
    idx = pair_index(n)
    size = len(idx)
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc: dict = {}
                _add_wedge_unit(acc, idx, L.bracket_basis(i, j), k, 1)      # [e_i,e_j] ∧ e_k
                _add_wedge_unit(acc, idx, L.bracket_basis(j, k), i, 1)      # -e_i ∧ [e_j,e_k]
                _add_wedge_unit(acc, idx, L.bracket_basis(i, k), j, -1)     # +e_j ∧ [e_i,e_k]
                if any(c != 0 for c in acc.values()):
                    rows.append(_dense(acc, size, F.zero))
    rel = Subspace.span(F, size, rows)
    model = ExteriorSquareModel(L, rel, rel.quotient_map())
    if check:
        # x ∧ y -> [x, y] must kill every relation
        d2 = _bracket_matrix(L)
        if rel.dim:
            assert (d2 @ rel.matrix.T).is_zero(), "exterior relations not killed by the bracket"
        h2 = ce_h2(L)
        if model.quotient_dim != L.derived.dim + h2:
            raise RouteMismatch(
                f"dim L∧L = {model.quotient_dim} but dim L² + dim H_2 = {L.derived.dim} + {h2}")
    return model


def ce_boundary3(L: LieAlgebra) -> Matrix:
    """``d_3(e_i∧e_j∧e_k) = -[e_i,e_j]∧e_k + [e_i,e_k]∧e_j - [e_j,e_k]∧e_i``."""
    n, F = L.dim, L.field
    idx = pair_index(n)
    size = len(idx)
    cols = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                col = [F.zero] * size
                for (a, b), c, sign in (((i, j), k, -1), ((i, k), j, 1), ((j, k), i, -1)):
                    v = L.bracket_basis(a, b)
                    for l in range(n):
                        if v[l] == 0 or l == c:
                            continue
                        # e_l ∧ e_c with l the bracket coordinate
                        if l < c:
                            col[idx[(l, c)]] += sign * v[l]
                        else:
                            col[idx[(c, l)]] -= sign * v[l]
                cols.append(col)
    if not cols:
        return F.zeros(size, 0)
    return F.matrix([[col[r] for col in cols] for r in range(size)], len(cols))


def ce_h2(L: LieAlgebra) -> int:
    """``dim H_2(L) = dim ker d_2 - rank d_3`` with trivial coefficients."""
    n = L.dim
    size = n * (n - 1) // 2
    rank_d2 = _bracket_matrix(L).rank()
    rank_d3 = ce_boundary3(L).rank()
    return (size - rank_d2) - rank_d3


def multiplier_dims(L: LieAlgebra) -> tuple[int, int]:
    """``(exterior route, homology route)``; raises :class:`RouteMismatch` if they differ."""
    model = exterior_square(L, check=False)
    ext = model.quotient_dim - L.derived.dim
    hom = ce_h2(L)
    if ext != hom:
        raise RouteMismatch(f"multiplier: exterior route {ext}, homology route {hom}")
    return ext, hom


def multiplier_dim(L: LieAlgebra) -> int:
    return multiplier_dims(L)[0]


def exterior_center(L: LieAlgebra, model: ExteriorSquareModel | None = None) -> Subspace:
    """``Z^∧(L) = {x : x ∧ y = 0 for all y}``."""
    model = model or exterior_square(L, check=False)
    n, F = L.dim, L.field
    q = model.quotient_map
    if q.nrows == 0:
        return L.full()
    idx = pair_index(n)
    qrows = q.rows
    rows = []
    for j in range(n):
        # image of e_i ∧ e_j, as a linear function of the coefficient of e_i
        for r in qrows:
            row = [F.zero] * n
            for i in range(n):
                if i < j:
                    row[i] = r[idx[(i, j)]]
                elif i > j:
                    row[i] = -r[idx[(j, i)]]
            rows.append(row)
    zc = kernel(F.matrix(rows, n))
    assert zc.issubspace(L.center), "exterior center escaped the center"
    return zc


@dataclass(frozen=True)
class CapabilityReport:
    exterior_center: Subspace
    capable: bool
    multiplier_dim_exterior: int
    multiplier_dim_homology: int
    unicentral: bool

    def to_dict(self) -> dict:
        F = self.exterior_center.field
        return {
            "capable": self.capable,
            "unicentral": self.unicentral,
            "exterior_center_dim": self.exterior_center.dim,
            "exterior_center_basis": [[F.format(x) for x in v] for v in self.exterior_center.basis],
            "multiplier_dim_exterior": self.multiplier_dim_exterior,
            "multiplier_dim_homology": self.multiplier_dim_homology,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def is_capable(L: LieAlgebra) -> CapabilityReport:
    """Capability via the exterior center: ``L`` is capable iff ``Z^∧(L) = 0``."""
    model = exterior_square(L, check=False)
    zc = exterior_center(L, model)
    ext = model.quotient_dim - L.derived.dim
    hom = ce_h2(L)
    if ext != hom:
        raise RouteMismatch(f"multiplier: exterior route {ext}, homology route {hom}")
    return CapabilityReport(zc, zc.dim == 0, ext, hom, zc == L.center)
