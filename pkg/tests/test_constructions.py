import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from nilclass.constructions import (
    CentralIdentification,
    central_product,
    central_product_builds,
    central_product_parts,
    heisenberg,
    heisenberg_decompose,
    is_derivation,
    semidirect_sum,
    standard,
    stem_decompose,
)
from nilclass.errors import DimensionMismatch, InvalidAction, NotCentral, NotHeisenberg, ParamOutOfRange
from nilclass.field_linalg import GF, QQ, random_invertible
from nilclass.iso import fingerprint, search_isomorphism
from nilclass.lie_core import (
    abelian,
    change_basis,
    direct_sum,
    is_ideal,
    nilpotency_class,
    product_subspace,
    restrict,
)
from nilclass.presentations import catalog


def permutation(F, order):
    """Matrix sending basis vector ``i`` to basis vector ``order[i]``."""
    n = len(order)
    return F.matrix([[int(order[j] == i) for j in range(n)] for i in range(n)], n)


# -- standard algebras -----------------------------------------------------------

def test_heisenberg_examples():
    H = heisenberg(1)
    assert H.dim == 3 and H.center == H.derived == H.span_basis([2])
    assert abelian(0).dim == 0 and standard("abelian", 0) == abelian(0)
    H3 = heisenberg(3)
    assert H3.dim == 7 and nilpotency_class(H3) == 2
    with pytest.raises(ParamOutOfRange):
        heisenberg(0)
    with pytest.raises(ValueError):
        standard("simple", 2)


# -- semidirect sums ---------------------------------------------------------------

def test_l611_as_semidirect_sum():
    """``L5_6`` (as ``x1,x2,x3,x4,x6``) extended by ``x5`` with ``[x2,x5] = x6``."""
    I = catalog("L5_6")
    L = semidirect_sum(I, abelian(1), {(0, 1): (0, 0, 0, 0, -1)})
    # semidirect basis: x1 x2 x3 x4 x6 | x5
    assert change_basis(L, permutation(QQ, [0, 1, 2, 3, 5, 4])) == catalog("L6_11")


def test_l612_as_semidirect_sum():
    L = semidirect_sum(catalog("L5_7"), abelian(1), {(0, 1): (0, 0, 0, 0, -1)})
    assert change_basis(L, permutation(QQ, [0, 1, 2, 3, 5, 4])) == catalog("L6_12")


def test_l613_as_semidirect_sum():
    """``L5_7`` on ``x1,x2,x3,x5,x6`` extended by ``x4``: ``[x2,x4] = x5``, ``[x3,x4] = x6``."""
    L = semidirect_sum(catalog("L5_7"), abelian(1), {(0, 1): (0, 0, 0, -1, 0), (0, 2): (0, 0, 0, 0, -1)})
    assert change_basis(L, permutation(QQ, [0, 1, 2, 4, 5, 3])) == catalog("L6_13")


def test_l55_as_semidirect_sum():
    """``L4_3`` on ``x1,x2,x3,x5`` extended by ``x4`` with ``[x2,x4] = x5``."""
    L = semidirect_sum(catalog("L4_3"), abelian(1), {(0, 1): (0, 0, 0, -1)})
    assert change_basis(L, permutation(QQ, [0, 1, 2, 4, 3])) == catalog("L5_5")


def test_zero_action_is_direct_sum():
    I, K = catalog("L5_6"), heisenberg(1)
    assert semidirect_sum(I, K, {}) == direct_sum(I, K)


def test_non_derivation_rejected():
    with pytest.raises(InvalidAction):
        semidirect_sum(catalog("L4_3"), abelian(1), {(0, 0): (1, 0, 0, 0)})
    with pytest.raises(DimensionMismatch):
        semidirect_sum(catalog("L4_3"), abelian(1), {(2, 0): (1, 0, 0, 0)})


def test_is_derivation():
    L = catalog("L4_3")
    assert is_derivation(L, QQ.identity(4).scale(0))
    # ad(x1) is inner
    assert is_derivation(L, L.ad_matrices[0])
    assert not is_derivation(L, QQ.identity(4))


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(["L5_6", "L5_7"]), st.integers(0, 4), st.integers(1, 4))
def test_central_derivation_extensions_are_l611_or_l612(label, a, b):
    """``I ⋊ A(1)`` with ``[I, K]`` the center of ``I`` and ``Z(L) = Z(I)``."""
    F = GF(5)
    I = catalog(label, field=F)
    L = semidirect_sum(I, abelian(1, F), {(0, 0): (0, 0, 0, 0, a), (0, 1): (0, 0, 0, 0, b)})
    assert L.center.dim == 1
    target = catalog("L6_11" if label == "L5_6" else "L6_12", field=F)
    assert fingerprint(L) == fingerprint(target)
    assert search_isomorphism(L, target, F) is not None


# -- central products -----------------------------------------------------------

def test_central_product_l56_h1_is_te():
    A, H = catalog("L5_6"), heisenberg(1)
    L, a_img, b_img = central_product_parts(A, H, CentralIdentification.pairs(A, H, [(4, 2)]))
    assert L.dim == 7
    assert fingerprint(L) == fingerprint(catalog("T_e"))
    assert is_ideal(L, a_img) and is_ideal(L, b_img)
    assert product_subspace(L, a_img, b_img).dim == 0
    assert (a_img & b_img) <= L.center


def test_central_product_with_nothing_identified():
    A, B = catalog("L4_3"), heisenberg(1)
    assert central_product(A, B, CentralIdentification((), ())) == direct_sum(A, B)


def test_h1_times_h1_is_h2():
    H = heisenberg(1)
    L = central_product(H, H, CentralIdentification.pairs(H, H, [(2, 2)]))
    assert fingerprint(L) == fingerprint(heisenberg(2))
    assert search_isomorphism(L, heisenberg(2), GF(3)) is not None


def test_central_product_rejects_noncentral():
    A, H = catalog("L4_3"), heisenberg(1)
    with pytest.raises(NotCentral):
        central_product(A, H, CentralIdentification.pairs(A, H, [(2, 2)]))
    with pytest.raises(DimensionMismatch):
        central_product(A, H, CentralIdentification((A.basis_vector(3),), ()))


def test_central_product_with_correspondence():
    H = heisenberg(1)
    ident = CentralIdentification((H.basis_vector(2),), (H.basis_vector(2),), QQ.matrix([[-3]]))
    assert fingerprint(central_product(H, H, ident)) == fingerprint(heisenberg(2))


@pytest.mark.parametrize("build", list(central_product_builds(3)), ids=lambda b: f"{b[0]}-{b[1]}")
def test_shipped_central_products_match_catalog(build):
    label, m, L, a_img, b_img = build
    assert fingerprint(L) == fingerprint(catalog(label, m=m))
    assert product_subspace(L, a_img, b_img).dim == 0


# -- Heisenberg splitting --------------------------------------------------------

def check_blocks(L, blocks, m):
    assert len(blocks) == m
    for B in blocks:
        R = restrict(L, B.basis)
        assert R.dim == 3 and R.derived == R.center and R.derived.dim == 1
        assert is_ideal(L, B)
    for i, B in enumerate(blocks):
        for C in blocks[i + 1:]:
            assert product_subspace(L, B, C).dim == 0
    total = blocks[0]
    for B in blocks[1:]:
        total = total + B
    assert total == L.full()


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_heisenberg_decompose(m):
    H = heisenberg(m)
    check_blocks(H, heisenberg_decompose(H), m)


@pytest.mark.parametrize("seed", range(5))
def test_heisenberg_decompose_after_basis_change(seed):
    H = heisenberg(3)
    L = change_basis(H, random_invertible(QQ, 7, random.Random(seed)))
    check_blocks(L, heisenberg_decompose(L), 3)


def test_heisenberg_decompose_rejects_others():
    with pytest.raises(NotHeisenberg):
        heisenberg_decompose(catalog("L4_3"))
    with pytest.raises(NotHeisenberg):
        heisenberg_decompose(direct_sum(heisenberg(1), abelian(1)))


# -- stem decomposition ----------------------------------------------------------

def test_stem_decompose_of_stem_algebra():
    L = catalog("L6_13")
    d = stem_decompose(L)
    assert d.abelian_rank == 0 and d.stem == L


def test_stem_decompose_splits_abelian_summand():
    d = stem_decompose(direct_sum(catalog("L5_6"), abelian(3)))
    assert d.abelian_rank == 3
    assert fingerprint(d.stem) == fingerprint(catalog("L5_6"))


def test_stem_decompose_of_abelian():
    d = stem_decompose(abelian(4))
    assert d.stem.dim == 0 and d.abelian_rank == 4


@pytest.mark.parametrize("label, m, k", [("L5_6", None, 2), ("T_k", 1, 1), ("T_g", 2, 2), ("L6_13", None, 1)])
def test_stem_decompose_reconstructs(label, m, k):
    F = GF(5)
    base = direct_sum(catalog(label, m=m, field=F), abelian(k, F))
    L = change_basis(base, random_invertible(F, base.dim, random.Random(k)))
    d = stem_decompose(L)
    assert d.abelian_rank == k
    assert d.change_of_basis().is_invertible()
    rebuilt = direct_sum(d.stem, abelian(d.abelian_rank, F))
    assert fingerprint(rebuilt) == fingerprint(L)
    assert search_isomorphism(rebuilt, L, F) is not None
    assert d.stem.center <= d.stem.derived
