"""
Recognising a disguised algebra
===============================

Build a class-4 algebra, hide it behind an abelian summand and a random basis,
then let the classifier recover it.
"""
import random

from nilclass import GF, abelian, catalog, change_basis, classify, direct_sum, stem_decompose
from nilclass.field_linalg import random_invertible

F = GF(5)

# T_k with m = 2 is (L6_11 with an H(2) attached), dimension 10
T = catalog("T_k", m=2, field=F)
L = direct_sum(T, abelian(2, F))
print("built", L.dim, "dimensional algebra over", F.descriptor)

# scramble the basis so nothing is visible in the table
L = change_basis(L, random_invertible(F, L.dim, random.Random(11)))
print("nonzero brackets after scrambling:", len(L.table))

# the abelian part splits off first
d = stem_decompose(L)
print("stem part has dimension", d.stem.dim, "and abelian rank", d.abelian_rank)

r = classify(L)
print(r.stem_label, "m =", r.m, "rank =", r.abelian_rank, "capable =", r.capable)
print("central quotient of the stem part:", r.central_factor_label)
