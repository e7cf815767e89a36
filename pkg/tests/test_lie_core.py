import itertools
import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from _support import random_nilpotent, subalgebra_generated
from nilclass.constructions import heisenberg
from nilclass.errors import AntisymmetryViolation, DimensionMismatch, JacobiViolation, NotNilpotent
from nilclass.exterior import is_capable, multiplier_dim
from nilclass.field_linalg import GF, QQ, random_invertible
from nilclass.iso import fingerprint
from nilclass.lie_core import (
    abelian,
    bracket,
    change_basis,
    direct_sum,
    is_ideal,
    is_isomorphism,
    is_stem,
    is_subalgebra,
    lower_term,
    nilpotency_class,
    product_subspace,
    quotient,
    restrict,
    upper_term,
    validate,
)
from nilclass.presentations import CATALOG, catalog

ALL_FIXED = [lab for lab, e in CATALOG.items() if e.param is None]


def L43(field=QQ):
    return catalog("L4_3", field=field)


# -- validation ----------------------------------------------------------------

@pytest.mark.parametrize("n", [0, 1, 4])
def test_abelian_tables_are_valid(n):
    L = validate(n, {})
    assert L.dim == n and L.table == {}


def test_l43_presentation_is_valid():
    L = validate(4, {(0, 1): {2: 1}, (0, 2): {3: 1}})
    assert L == L43()


def test_jacobi_violation_reports_triple():
    with pytest.raises(JacobiViolation) as exc:
        validate(3, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    (i, j, k, residual), = exc.value.witnesses
    assert (i, j, k) == (0, 1, 2)
    assert any(x != 0 for x in residual)


def test_antisymmetry_checked():
    with pytest.raises(AntisymmetryViolation):
        validate(3, {(0, 1): {2: 1}, (1, 0): {2: 1}})
    # consistent lower-triangle entries are accepted
    assert validate(3, {(1, 0): {2: -1}}) == heisenberg(1)


def test_diagonal_must_vanish():
    with pytest.raises(AntisymmetryViolation):
        validate(2, {(0, 0): {1: 1}})


def test_gf2_alternation_is_structural():
    L = heisenberg(1, GF(2))
    for u in itertools.product(range(2), repeat=3):
        assert all(x == 0 for x in bracket(L, u, u))


# -- brackets and products -----------------------------------------------------

def test_bracket_examples():
    L = L43()
    x = [L.basis_vector(i) for i in range(4)]
    assert bracket(L, x[0], x[1]) == x[2]
    assert bracket(L, x[1], x[0]) == tuple(-c for c in x[2])
    with pytest.raises(DimensionMismatch):
        bracket(L, (1, 0), x[1])


@settings(max_examples=40)
@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6), st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_bracket_alternating_and_antisymmetric(u, v):
    L = catalog("L6_13")
    assert all(x == 0 for x in bracket(L, u, u))
    assert bracket(L, u, v) == tuple(-x for x in bracket(L, v, u))


def test_derived_of_l43():
    L = L43()
    assert product_subspace(L, L.full(), L.full()) == L.span_basis([2, 3])


@pytest.mark.parametrize("label", ALL_FIXED)
def test_center_brackets_to_zero(label):
    L = catalog(label)
    assert product_subspace(L, L.center, L.full()).dim == 0


def test_semidirect_factor_bracket_in_l611():
    L = catalog("L6_11")
    I = L.span_basis([0, 1, 2, 3, 5])
    K = L.span_basis([4])
    assert product_subspace(L, I, K) == L.span_basis([5])


# -- series --------------------------------------------------------------------

def test_lower_central_examples():
    assert L43().lower_central.dims == [4, 2, 1, 0]
    assert abelian(3).lower_central.dims == [3, 0]
    assert catalog("L6_13").lower_central.dims == [6, 3, 2, 1, 0]


def test_upper_central_examples():
    L = catalog("L5_7")
    assert L.center == L.span_basis([4])
    assert abelian(3).upper_central[1] == abelian(3).full()


def test_second_center_of_l611_by_enumeration():
    """``Z_2`` by brute force over GF(3): vectors whose brackets land in the center."""
    L = catalog("L6_11", field=GF(3))
    Z = L.center
    members = [v for v in itertools.product(range(3), repeat=6)
               if all(bracket(L, v, L.basis_vector(i)) in Z for i in range(6))]
    assert len(members) == 3 ** upper_term(L, 2).dim
    assert upper_term(L, 2).dim == 3
    assert all(v in upper_term(L, 2) for v in members)


def test_nilpotency_class_examples():
    assert nilpotency_class(catalog("L5_6")) == 4
    assert nilpotency_class(abelian(2)) == 1
    assert nilpotency_class(heisenberg(2)) == 2


def test_not_nilpotent_is_recoverable():
    L = validate(2, {(0, 1): {1: 1}})
    series = L.lower_central
    assert not series.nilpotent and series.dims == [2, 1]
    assert not L.upper_central.nilpotent
    with pytest.raises(NotNilpotent):
        nilpotency_class(L)


def test_lower_and_upper_term_indexing():
    L = catalog("L5_6")
    assert lower_term(L, 1) == L.full()
    assert lower_term(L, 9).dim == 0
    assert upper_term(L, 0).dim == 0 and upper_term(L, 99) == L.full()
    with pytest.raises(ValueError):
        lower_term(L, 0)


@pytest.mark.parametrize("label", ALL_FIXED)
def test_series_products_respect_filtration(label):
    L = catalog(label)
    c = len(L.lower_central.terms) - 1
    for i in range(1, c + 1):
        for j in range(1, c + 1):
            prod = product_subspace(L, lower_term(L, i), lower_term(L, j))
            assert prod <= lower_term(L, i + j)


# -- stem, ideals, quotients ---------------------------------------------------

def test_is_stem_examples():
    assert is_stem(catalog("L6_13"))
    assert not is_stem(abelian(1))
    assert not is_stem(direct_sum(catalog("L5_6"), abelian(1)))


def test_is_ideal_examples():
    L = L43()
    assert is_ideal(L, L.derived) and is_ideal(L, L.center)
    assert not is_ideal(L, L.span_basis([0]))
    assert is_subalgebra(L, L.span_basis([0]))


def test_quotient_examples():
    Q, _ = quotient(catalog("L6_18"), catalog("L6_18").span_basis([5]))
    assert fingerprint(Q) == fingerprint(catalog("L5_7"))
    L = catalog("L5_6")
    assert quotient(L, L.full())[0].dim == 0
    H = heisenberg(1)
    Q, proj = quotient(H, H.center)
    assert Q == abelian(2) and proj.shape == (2, 3)


def test_quotient_map_is_homomorphism():
    L = catalog("T_n")
    Q, proj = quotient(L, L.center)
    for a in range(L.dim):
        for b in range(L.dim):
            lhs = proj.apply(bracket(L, L.basis_vector(a), L.basis_vector(b)))
            rhs = bracket(Q, proj.apply(L.basis_vector(a)), proj.apply(L.basis_vector(b)))
            assert lhs == rhs


def test_restrict_to_ideal():
    L = catalog("L6_11")
    I = restrict(L, [L.basis_vector(i) for i in (0, 1, 2, 3, 5)])
    assert fingerprint(I) == fingerprint(catalog("L5_6"))


def test_direct_sum_examples():
    L = direct_sum(catalog("L5_6"), abelian(2))
    assert (L.dim, nilpotency_class(L), L.derived.dim) == (7, 4, 3)
    assert direct_sum(L43(), abelian(0)) == L43()
    assert direct_sum(abelian(2), abelian(3)) == abelian(5)


# -- basis changes ---------------------------------------------------------------

def test_change_basis_identity_and_permutation():
    L = catalog("L6_12")
    assert change_basis(L, QQ.identity(6)) == L
    perm = QQ.matrix([[int(j == (i + 1) % 4) for j in range(4)] for i in range(4)])
    assert change_basis(abelian(4), perm) == abelian(4)


def test_change_basis_gives_isomorphism():
    F = GF(5)
    L = L43(F)
    P = random_invertible(F, 4, random.Random(1))
    M = change_basis(L, P)
    assert is_isomorphism(L, M, P)
    assert fingerprint(M) == fingerprint(L)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(["L5_6", "L5_7", "L6_11", "L6_13", "T_e", "L5_5"]), st.integers(0, 10**6),
       st.sampled_from([QQ, GF(5)]))
def test_change_basis_preserves_invariants(label, seed, F):
    L = catalog(label, field=F)
    M = change_basis(L, random_invertible(F, L.dim, random.Random(seed)))
    assert nilpotency_class(M) == nilpotency_class(L)
    assert M.lower_central.dims == L.lower_central.dims
    assert M.upper_central.dims == L.upper_central.dims
    assert multiplier_dim(M) == multiplier_dim(L)
    assert is_capable(M).capable == is_capable(L).capable


# -- structural identities over the catalog ----------------------------------------

CLASS4_DIM3 = ["L5_6", "L5_7", "L6_11", "L6_12", "L6_13", "L7_NC", "T_e", "T_f", "T_n", "T_p"]
CHAIN_TYPE = CLASS4_DIM3 + ["L4_3", "L5_5", "L6_15", "L6_18", "H7_cover"]


@pytest.mark.parametrize("label", CHAIN_TYPE)
def test_derived_meets_upper_series_in_lower_terms(label):
    """With ``dim L² = c-1``: ``L² ∩ Z_i = L^(c-i+1)`` for ``0 <= i <= c-1``."""
    L = catalog(label)
    c = nilpotency_class(L)
    if L.derived.dim != c - 1:
        pytest.skip("derived algebra not of dimension c-1")
    for i in range(c):
        assert L.derived & upper_term(L, i) == lower_term(L, c - i + 1)


@pytest.mark.parametrize("label", CHAIN_TYPE)
def test_stem_iff_center_is_last_term(label):
    L = catalog(label)
    c = nilpotency_class(L)
    if L.derived.dim != c - 1:
        pytest.skip("derived algebra not of dimension c-1")
    assert is_stem(L) == (L.center == lower_term(L, c) and L.center.dim == 1)
    non_stem = direct_sum(L, abelian(1))
    assert not is_stem(non_stem)
    assert not (non_stem.center == lower_term(non_stem, c) and non_stem.center.dim == 1)


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6))
def test_subalgebra_covering_derived_has_same_lower_terms(seed):
    """If ``L² = H² + L³`` for a subalgebra ``H`` then ``L^i = H^i`` for ``i >= 2``."""
    rng = random.Random(seed)
    F = GF(5)
    L = random_nilpotent(F, rng.randint(4, 8), rng)
    D = L.derived
    # images of a generating set, each shifted by a random element of L²
    gens = []
    for v in D.standard_complement():
        shift = [F.zero] * L.dim
        for b in D.basis:
            c = F.random_scalar(rng)
            shift = [s + c * x for s, x in zip(shift, b)]
        gens.append([a + s for a, s in zip(v, shift)])
    H = subalgebra_generated(L, gens)
    assert product_subspace(L, H, H) + lower_term(L, 3) == D
    Hi = H
    for i in range(2, len(L.lower_central.terms) + 1):
        Hi = product_subspace(L, H, Hi)
        assert Hi == lower_term(L, i)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_random_nilpotent_is_nilpotent(seed):
    rng = random.Random(seed)
    L = random_nilpotent(GF(5), rng.randint(3, 7), rng)
    assert L.lower_central.nilpotent and L.upper_central.terms[-1] == L.full()
