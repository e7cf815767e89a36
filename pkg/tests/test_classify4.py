import json
import random

import pytest

import nilclass.classify4 as c4
from nilclass.classify4 import (
    capability_verdict_fg1,
    capable_by_central_quotient,
    central_factor,
    classify,
    precheck,
    stem_candidates,
)
from nilclass.constructions import stem_decompose
from nilclass.errors import AmbiguousMatch, ConsistencyError, NoCatalogMatch, NotEligible
from nilclass.exterior import is_capable
from nilclass.field_linalg import GF, QQ, random_invertible
from nilclass.lie_core import abelian, change_basis, direct_sum
from nilclass.presentations import catalog


def test_precheck_examples():
    pc = precheck(catalog("L6_13"))
    assert (pc.nilpotency_class, pc.derived_dim, pc.eligible) == (4, 3, True)
    pc = precheck(abelian(5))
    assert (pc.nilpotency_class, pc.eligible) == (1, False)
    pc = precheck(catalog("L5_5"))
    assert (pc.nilpotency_class, pc.derived_dim, pc.eligible) == (3, 2, False)


def test_precheck_non_nilpotent():
    from nilclass.lie_core import validate

    pc = precheck(validate(2, {(0, 1): {1: 1}}))
    assert pc.nilpotency_class is None and not pc.eligible


def test_classify_examples():
    r = classify(direct_sum(catalog("L6_11"), abelian(2)))
    assert (r.stem_label, r.abelian_rank, r.capable) == ("T_c", 2, True)
    r = classify(catalog("T_g", m=2))
    assert (r.stem_label, r.m, r.abelian_rank, r.capable) == ("T_g", 2, 0, False)
    r = classify(catalog("L5_6"))
    assert (r.stem_label, r.abelian_rank, r.capable) == ("L5_6", 0, True)


def test_named_algebras_resolve_to_families():
    assert classify(catalog("L5_7")).stem_label == "L5_7"
    assert classify(catalog("L6_13")).stem_label == "T_m"
    assert classify(catalog("L7_NC")).stem_label == "T_n"


def test_central_quotient_verdict_examples():
    assert capability_verdict_fg1(catalog("L5_7"))
    assert not capability_verdict_fg1(catalog("T_n"))
    assert capability_verdict_fg1(direct_sum(catalog("L6_12"), abelian(1)))
    with pytest.raises(NotEligible):
        capability_verdict_fg1(catalog("L4_3"))


def test_not_eligible():
    with pytest.raises(NotEligible):
        classify(abelian(3))
    with pytest.raises(NotEligible):
        classify(catalog("L6_18"))


def test_stem_candidates():
    assert stem_candidates(5) == [("T_a", None), ("T_b", None)]
    assert set(stem_candidates(7)) == {("T_e", None), ("T_f", None), ("T_n", None)}
    assert ("T_r", 1) in stem_candidates(9) and ("T_g", 2) in stem_candidates(9)


@pytest.mark.parametrize("label, m, expected", [
    ("T_a", None, "L4_3"), ("T_c", None, "L4_3+A(1)"), ("T_g", 2, "L4_3+A(4)"),
    ("T_m", None, "L5_5"), ("T_r", 1, "L5_5+A(3)"),
])
def test_central_factor(label, m, expected):
    assert central_factor(catalog(label, m=m)) == expected


@pytest.mark.parametrize("label, m, k, seed", [("T_e", None, 1, 0), ("T_l", 1, 2, 1), ("T_q", 2, 0, 2)])
def test_consistency_with_stem_decomposition(label, m, k, seed):
    F = GF(5)
    base = direct_sum(catalog(label, m=m, field=F), abelian(k, F))
    L = change_basis(base, random_invertible(F, base.dim, random.Random(seed)))
    r = classify(L)
    assert r.abelian_rank == stem_decompose(L).abelian_rank == k
    assert r.capable == is_capable(L).capable == capable_by_central_quotient(L)
    assert capability_verdict_fg1 is capable_by_central_quotient


def test_result_serialization_is_stable():
    r = classify(catalog("T_k", m=1))
    d = json.loads(r.to_json())
    assert list(d) == ["stem_label", "m", "abelian_rank", "capable", "stem_dim",
                       "central_factor_label", "fingerprint", "notes"]
    assert r.to_json() == classify(catalog("T_k", m=1)).to_json()


def test_gf5_input_classifies():
    r = classify(catalog("T_r", m=1, field=GF(5)))
    assert (r.stem_label, r.m, r.capable) == ("T_r", 1, False)


# -- failure paths (forced by patching the catalog fingerprints) --------------------

def test_no_catalog_match_has_diagnostics(monkeypatch):
    real = c4._catalog_fingerprint

    def shifted(label, m, desc):
        fp = real(label, m, desc)
        return type(fp)(fp.entries + (("forced", 1),))

    monkeypatch.setattr(c4, "_catalog_fingerprint", shifted)
    with pytest.raises(NoCatalogMatch) as exc:
        classify(catalog("T_e"))
    assert exc.value.diagnostics["stem_dim"] == 7
    assert "T_f(m=None)" in exc.value.diagnostics["candidates"]


def test_collision_resolved_by_search(monkeypatch):
    """Every seven-dimensional family claims the same fingerprint; the search decides."""
    target = c4.fingerprint(catalog("T_f"))
    monkeypatch.setattr(c4, "_catalog_fingerprint", lambda label, m, desc: target)
    r = classify(change_basis(catalog("T_f"), random_invertible(QQ, 7, random.Random(3))))
    assert r.stem_label == "T_f"
    assert any("resolved by search" in n for n in r.notes)


def test_unresolved_collision_is_ambiguous(monkeypatch):
    target = c4.fingerprint(catalog("T_e"))
    monkeypatch.setattr(c4, "_catalog_fingerprint", lambda label, m, desc: target)
    monkeypatch.setattr(c4, "search_isomorphism", lambda *a, **k: object())
    with pytest.raises(AmbiguousMatch) as exc:
        classify(catalog("T_e"))
    assert len(exc.value.candidates) == 3


def test_verdict_disagreement_is_consistency_error(monkeypatch):
    real = c4.is_capable

    def flipped(L):
        rep = real(L)
        return type(rep)(rep.exterior_center, not rep.capable, rep.multiplier_dim_exterior,
                         rep.multiplier_dim_homology, rep.unicentral)

    monkeypatch.setattr(c4, "is_capable", flipped)
    with pytest.raises(ConsistencyError):
        classify(catalog("L5_6"))
