"""
When invariants are not enough
==============================

Over GF(5) the algebras with ``[x3,x5] = e*x6`` share every invariant the
fingerprint measures, yet fall into two isomorphism classes: one for the
squares {1, 4} and one for the non-squares {2, 3}.  The backtracking search
tells them apart.
"""
import time

from nilclass import GF, fingerprint, parse_presentation, search_isomorphism

F = GF(5)


def member(e):
    return parse_presentation(f"dim 6; [x1,x2]=x4; [x1,x3]=x5; [x2,x4]=x6; [x3,x5]={e}*x6", F)


algebras = {e: member(e) for e in (1, 2, 3, 4)}
print("one fingerprint for all four:", len({fingerprint(L) for L in algebras.values()}) == 1)

for a, b in [(1, 4), (2, 3), (1, 2), (1, 3)]:
    t = time.perf_counter()
    w = search_isomorphism(algebras[a], algebras[b], F)
    verdict = "isomorphic" if w is not None else "not isomorphic"
    print(f"e={a} vs e={b}: {verdict} ({time.perf_counter() - t:.2f}s)")
    if w is not None:
        print("  witness:", w.to_dict()["matrix"])
