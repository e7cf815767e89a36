"""
Which class-4 stem algebras are capable
=======================================

Walk the stem families with three-dimensional derived algebra and compute the
exterior center of each one.  Only the five small ones have a trivial center
there.
"""
from nilclass import catalog, is_capable
from nilclass.presentations import CATALOG, STEM_LABELS

rows = []
for label in STEM_LABELS:
    entry = CATALOG[label]
    ms = [None] if entry.param is None else range(entry.min_param, 4)
    for m in ms:
        L = catalog(label, m=m)
        rep = is_capable(L)
        rows.append((label, m, L.dim, rep.capable, rep.exterior_center.dim, rep.multiplier_dim_exterior))

print(f"{'label':6} {'m':>2} {'dim':>4} {'capable':>8} {'dim Z^':>7} {'dim M':>6}")
for label, m, n, cap, z, mult in rows:
    print(f"{label:6} {m if m is not None else '-':>2} {n:>4} {str(cap):>8} {z:>7} {mult:>6}")

# the capable ones are exactly those of dimension at most 6
assert all(cap == (n <= 6) for _, _, n, cap, _, _ in rows)
