"""Identify nilpotent Lie algebras of class 4 with three-dimensional derived
algebra, and decide capability.

Such an algebra splits as ``T ⊕ A(k)`` with ``T`` stem. ``T`` is matched
against the fifteen stem families by fingerprint, restricted to the
families whose dimension formula fits ``dim T``; a fingerprint collision
falls back to an explicit isomorphism search.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .constructions import stem_decompose
from .errors import AmbiguousMatch, BadPrime, BudgetExceeded, ConsistencyError, NoCatalogMatch, NotEligible, NotNilpotent
from .exterior import is_capable
from .field_linalg import GF, FieldSpec, subspace_intersection
from .iso import Fingerprint, fingerprint, search_isomorphism
from .lie_core import LieAlgebra, direct_sum, abelian, nilpotency_class, quotient
from .presentations import CATALOG, STEM_LABELS, catalog

# the dimension-5 families and L6_13 are reported under their usual names
RESULT_LABEL = {"T_a": "L5_6", "T_b": "L5_7"}
# Heisenberg rank built into the fixed-dimension families
_FIXED_M = {"T_e": 1, "T_f": 1, "T_p": 1}
SEARCH_FIELD = GF(5)


@dataclass(frozen=True)
class Precheck:
    nilpotency_class: int | None
    derived_dim: int
    eligible: bool


def precheck(L: LieAlgebra) -> Precheck:
    """Eligible when ``L`` is nilpotent of class 4 with ``dim L² = 3``."""
    try:
        cls = nilpotency_class(L)
    except NotNilpotent:
        cls = None
    d = L.derived.dim
    return Precheck(cls, d, cls == 4 and d == 3)


def _require_eligible(L: LieAlgebra) -> None:
    pc = precheck(L)
    if not pc.eligible:
        raise NotEligible(f"need class 4 and dim L² = 3; got class {pc.nilpotency_class}, "
                          f"dim L² = {pc.derived_dim}")


def capable_by_central_quotient(L: LieAlgebra) -> bool:
    """Capable exactly when ``4 <= dim L/Z(L) <= 5``."""
    _require_eligible(L)
    return 4 <= L.dim - L.center.dim <= 5


capability_verdict_fg1 = capable_by_central_quotient


@dataclass(frozen=True)
class ClassificationResult:
    stem_label: str
    m: int
    abelian_rank: int
    capable: bool
    fingerprint: Fingerprint
    central_factor_label: str
    stem_dim: int = 0
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "stem_label": self.stem_label,
            "m": self.m,
            "abelian_rank": self.abelian_rank,
            "capable": self.capable,
            "stem_dim": self.stem_dim,
            "central_factor_label": self.central_factor_label,
            "fingerprint": self.fingerprint.as_dict(),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def stem_candidates(n: int) -> list[tuple[str, int | None]]:
    """Catalog stem families (and parameter) whose dimension formula gives ``n``."""
    out = []
    for label in STEM_LABELS:
        entry = CATALOG[label]
        if entry.param is None:
            if entry.dim(None) == n:
                out.append((label, None))
        else:
            for m in range(entry.min_param, n):
                if entry.dim(m) == n:
                    out.append((label, m))
    return out


@lru_cache(maxsize=None)
def _catalog_fingerprint(label: str, m: int | None, descriptor: str) -> Fingerprint:
    return fingerprint(catalog(label, m=m, field=FieldSpec.from_descriptor(descriptor)))


@lru_cache(maxsize=None)
def _factor_fingerprint(kind: str, rank: int, descriptor: str) -> Fingerprint:
    F = FieldSpec.from_descriptor(descriptor)
    return fingerprint(direct_sum(catalog(kind, field=F), abelian(rank, F)))


def central_factor(T: LieAlgebra) -> str:
    """Which of ``L4_3 ⊕ A`` and ``L5_5 ⊕ A`` the central quotient of ``T`` is."""
    Q, _ = quotient(T, T.center)
    fp = fingerprint(Q)
    desc = T.field.descriptor
    hits = [kind for kind, base in (("L4_3", 4), ("L5_5", 5))
            if Q.dim >= base and _factor_fingerprint(kind, Q.dim - base, desc) == fp]
    if len(hits) != 1:
        raise ConsistencyError(f"central quotient of the stem part matches {hits or 'neither'} "
                               "of L4_3 ⊕ A and L5_5 ⊕ A")
    kind = hits[0]
    rank = Q.dim - (4 if kind == "L4_3" else 5)
    return kind if rank == 0 else f"{kind}+A({rank})"


def _resolve_collision(T: LieAlgebra, tied: list[tuple[str, int | None]], notes: list[str]):
    """Explicit isomorphism search against each fingerprint-tied candidate."""
    F = T.field if not T.field.is_rational else SEARCH_FIELD
    found = []
    for label, m in tied:
        target = catalog(label, m=m, field=F)
        try:
            w = search_isomorphism(T, target, F)
        except (BadPrime, BudgetExceeded) as exc:
            notes.append(f"search against {label} (m={m}) inconclusive: {exc}")
            continue
        if w is not None:
            found.append((label, m))
    if len(found) != 1:
        raise AmbiguousMatch(f"fingerprint shared by {tied}; search confirmed {found}", candidates=tied)
    notes.append(f"fingerprint collision among {tied} resolved by search over {F.descriptor}")
    return found[0]


def classify(L: LieAlgebra) -> ClassificationResult:
    _require_eligible(L)
    dec = stem_decompose(L)
    T = dec.stem
    # Z(T) must be L² ∩ Z(L) (in L coordinates)
    zt = L.span([tuple(sum((x * b[i] for x, b in zip(v, dec.stem_basis)), L.field.zero) for i in range(L.dim))
                 for v in T.center.basis])
    if zt != subspace_intersection(L.derived, L.center):
        raise ConsistencyError("center of the stem part differs from L² ∩ Z(L)")
    factor = central_factor(T)
    fp = fingerprint(T)
    desc = T.field.descriptor
    cands = stem_candidates(T.dim)
    tied = [(lab, m) for lab, m in cands if _catalog_fingerprint(lab, m, desc) == fp]
    notes: list[str] = []
    if not tied:
        diag = {"stem_dim": T.dim, "fingerprint": fp.as_dict(),
                "candidates": {f"{lab}(m={m})": _catalog_fingerprint(lab, m, desc).as_dict() for lab, m in cands}}
        raise NoCatalogMatch(f"stem part of dimension {T.dim} matches no catalog family", diagnostics=diag)
    label, m = tied[0] if len(tied) == 1 else _resolve_collision(T, tied, notes)
    verdict = capable_by_central_quotient(L)
    report = is_capable(L)
    if verdict != report.capable:
        raise ConsistencyError(f"dimension criterion says capable={verdict}, exterior center says {report.capable}")
    m_value = m if m is not None else _FIXED_M.get(label, 0)
    result = ClassificationResult(RESULT_LABEL.get(label, label), m_value, dec.abelian_rank, verdict, fp,
                                  factor, T.dim, tuple(notes))
    _check_result(result)
    return result


def _check_result(r: ClassificationResult) -> None:
    entry = CATALOG[{v: k for k, v in RESULT_LABEL.items()}.get(r.stem_label, r.stem_label)]
    if entry.param == "m":
        if r.m < entry.min_param or entry.dim(r.m) != r.stem_dim:
            raise ConsistencyError(f"{r.stem_label} with m={r.m} cannot have dimension {r.stem_dim}")
    if r.capable and r.stem_dim > 6:
        raise ConsistencyError("a capable stem part has dimension at most 6")
