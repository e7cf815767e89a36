"""Isomorphism evidence: invariant fingerprints, map verification and a
bounded backtracking search over prime fields.

The search picks images of a generating set (a basis of ``L`` modulo
``L²``) one lower-central layer at a time. Brackets of generators determine
the whole map, and a relation between words of weights ``s`` and ``t`` can
be checked modulo ``L^(k+s+t)`` once the generator images are known modulo
``L^(k+1)``, so bad partial maps die early. Generators are also pinned
inside characteristic subspaces (upper central terms and centralizers),
which every isomorphism must respect.
"""
from __future__ import annotations

import itertools

import numpy as np
from dataclasses import dataclass

from .errors import BudgetExceeded, DimensionMismatch, FieldMismatch
from .field_linalg import FieldSpec, Matrix, Subspace, solve_rows, subspace_intersection
from .lie_core import (
    LieAlgebra,
    bracket,
    centralizer,
    is_isomorphism,
    lower_term,
    product_subspace,
    quotient,
)

DEFAULT_BUDGET = 10**7


# -- fingerprints -------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    entries: tuple[tuple[str, object], ...]

    def as_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in self.entries}

    def __getitem__(self, key):
        for k, v in self.entries:
            if k == key:
                return v
        raise KeyError(key)


def _characteristic_subspaces(L: LieAlgebra) -> list[tuple[str, Subspace]]:
    """Named subspaces preserved by every isomorphism, in a fixed order."""
    lower = L.lower_central.terms
    upper = L.upper_central.terms
    out = [(f"L^{i + 1}", t) for i, t in enumerate(lower)]
    out += [(f"Z_{i}", t) for i, t in enumerate(upper)]
    out += [(f"C(L^{i + 1})", centralizer(L, t)) for i, t in enumerate(lower[1:], start=1)]
    out += [(f"C(Z_{i})", centralizer(L, t)) for i, t in enumerate(upper[1:], start=1)]
    return out


def fingerprint(L: LieAlgebra) -> Fingerprint:
    """Ordered isomorphism invariants; equality is necessary, not sufficient."""
    from .exterior import exterior_center, exterior_square

    lower = L.lower_central.terms
    upper = L.upper_central.terms
    D = L.derived
    full = L.full()
    model = exterior_square(L, check=False)
    Q, _ = quotient(L, L.center)
    # exterior route only; the homology cross-check lives in multiplier_dims
    mult = model.quotient_dim - D.dim
    mult_q = exterior_square(Q, check=False).quotient_dim - Q.derived.dim
    entries = [
        ("dim", L.dim),
        ("lower_central", tuple(t.dim for t in lower)),
        ("upper_central", tuple(t.dim for t in upper)),
        ("derived_cap_upper", tuple(subspace_intersection(D, z).dim for z in upper)),
        ("multiplier", mult),
        ("exterior_center", exterior_center(L, model).dim),
        ("multiplier_central_quotient", mult_q),
        ("bracket_upper", tuple(product_subspace(L, full, z).dim for z in upper)),
        ("centralizer_lower", tuple(centralizer(L, t).dim for t in lower[1:])),
        ("centralizer_upper", tuple(centralizer(L, z).dim for z in upper[1:])),
    ]
    return Fingerprint(tuple(entries))


# -- explicit maps ------------------------------------------------------------

@dataclass(frozen=True)
class IsoWitness:
    matrix: Matrix
    source: str = ""
    target: str = ""

    def to_dict(self) -> dict:
        F = self.matrix.field
        return {
            "source": self.source,
            "target": self.target,
            "field": F.descriptor,
            "matrix": [[F.format(x) for x in r] for r in self.matrix.rows],
        }


def verify_isomorphism(L1: LieAlgebra, L2: LieAlgebra, P: Matrix) -> bool:
    """``P`` (acting on column coordinates) is invertible and bracket preserving."""
    if P.shape != (L1.dim, L1.dim) or L1.dim != L2.dim:
        raise DimensionMismatch("map and algebras must share one dimension")
    return is_isomorphism(L1, L2, P)


# -- search -------------------------------------------------------------------

def _reduce_to(L: LieAlgebra, field: FieldSpec) -> LieAlgebra:
    if L.field == field:
        return L
    if not L.field.is_rational:
        raise FieldMismatch(f"algebra over {L.field!r} cannot be searched over {field!r}")
    return L.reduce(field)


class _Words:
    """Basis of ``L`` made of left-normed commutators of generators."""

    def __init__(self, L: LieAlgebra, gens: list[tuple]):
        self.L = L
        c = len(L.lower_central.terms) - 1
        self.vectors: list[tuple] = []
        self.weight: list[int] = []
        self.recipe: list[tuple[int, int] | None] = []   # (generator, parent word)
        self.support: list[frozenset] = []
        for i, g in enumerate(gens):
            self._add(g, 1, None, frozenset([i]))
        prev = list(range(len(gens)))
        for t in range(2, c + 1):
            layer_span = lower_term(L, t + 1)
            chosen = []
            for i in range(len(gens)):
                for w in prev:
                    v = bracket(L, gens[i], self.vectors[w])
                    if not layer_span.contains(v):
                        layer_span = Subspace.span(L.field, L.dim, layer_span.basis + (v,))
                        chosen.append(self._add(v, t, (i, w), self.support[w] | {i}))
            prev = chosen
        if len(self.vectors) != L.dim:
            raise AssertionError("generators do not generate the algebra")
        F = L.field
        self.matrix = F.matrix(self.vectors, L.dim)
        pairs = [(a, b) for a in range(L.dim) for b in range(a + 1, L.dim)]
        prods = F.matrix([bracket(L, self.vectors[a], self.vectors[b]) for a, b in pairs], L.dim) \
            if pairs else F.zeros(0, L.dim)
        coords = solve_rows(self.matrix, prods)
        self.relations = []
        for (a, b), row in zip(pairs, coords.rows):
            terms = [(k, x) for k, x in enumerate(row) if x != 0]
            if self._is_defining(a, b, terms):
                continue
            support = self.support[a] | self.support[b]
            for k, _ in terms:
                support |= self.support[k]
            self.relations.append((a, b, terms, self.weight[a] + self.weight[b], support))

    def _add(self, v, weight, recipe, support) -> int:
        self.vectors.append(tuple(v))
        self.weight.append(weight)
        self.recipe.append(recipe)
        self.support.append(support)
        return len(self.vectors) - 1

    def _is_defining(self, a, b, terms) -> bool:
        """True when ``[w_a, w_b] = ±w_k`` is how ``w_k`` was built (holds by construction)."""
        if len(terms) != 1:
            return False
        k, x = terms[0]
        rec = self.recipe[k]
        return (rec == (a, b) and x == 1) or (rec == (b, a) and x == -1)

    def images(self, gen_images: list[tuple], L2: LieAlgebra, upto: int | None = None) -> list:
        """Images of all words whose generators are among the first ``upto``."""
        out: list = [None] * len(self.vectors)
        allowed = None if upto is None else set(range(upto))
        for k in range(len(self.vectors)):
            if allowed is not None and not self.support[k] <= allowed:
                continue
            rec = self.recipe[k]
            if rec is None:
                out[k] = gen_images[k]
            else:
                g, parent = rec
                out[k] = bracket(L2, out[g], out[parent])
        return out


def _adapted_generators(L: LieAlgebra, char: list[tuple[str, Subspace]]) -> tuple[list[tuple], list[list[str]]]:
    """Generators chosen inside the smallest characteristic subspaces first."""
    D = L.derived
    mods = sorted(((name, S + D) for name, S in char), key=lambda t: (t[1].dim, t[0]))
    spanned = D
    gens = []
    for name, SD in mods:
        for v in SD.basis:
            if not spanned.contains(v):
                gens.append(tuple(v))
                spanned = Subspace.span(L.field, L.dim, spanned.basis + (tuple(v),))
    flags = []
    for g in gens:
        flags.append([name for name, S in char if S.contains(g)])
    return gens, flags


def _ints(rows, ncols: int) -> np.ndarray:
    return np.array([[int(x) for x in r] for r in rows], dtype=np.int64).reshape(len(rows), ncols)


def _annihilator(S: Subspace) -> np.ndarray:
    """Integer matrix whose kernel mod p is ``S``."""
    q = S.quotient_map()
    return _ints(q.rows, S.ambient_dim)


def _drop_direction(Q: np.ndarray, w: np.ndarray, p: int) -> np.ndarray:
    """Annihilator of ``S + <v>`` from that of ``S``, given ``w = Q v != 0``."""
    j = int(np.flatnonzero(w)[0])
    inv = pow(int(w[j]), -1, p)
    out = (Q - np.outer(w * inv % p, Q[j])) % p
    return np.delete(out, j, axis=0)


def iter_isomorphisms(L1: LieAlgebra, L2: LieAlgebra, field: FieldSpec, budget: int = DEFAULT_BUDGET):
    """Yield every isomorphism ``L1 -> L2`` over ``field`` as a matrix.

    Enumeration order is deterministic. Raises :class:`BudgetExceeded` once
    more than ``budget`` partial assignments have been expanded.
    """
    if field.is_rational:
        raise ValueError("the search runs over a prime field")
    A, B = _reduce_to(L1, field), _reduce_to(L2, field)
    if A.dim != B.dim:
        return
    ca, cb = _characteristic_subspaces(A), _characteristic_subspaces(B)
    if [S.dim for _, S in ca] != [S.dim for _, S in cb]:
        return
    n, F, p = A.dim, field, field.p
    if n == 0:
        yield F.zeros(0, 0)
        return
    cmap = dict(cb)
    gens, flags = _adapted_generators(A, ca)
    allowed = []
    for fl in flags:
        S = B.full()
        for name in fl:
            S = subspace_intersection(S, cmap[name])
        allowed.append(S)
    # least constrained generators first: their relations prune the rest
    order = sorted(range(len(gens)), key=lambda g: -allowed[g].dim)
    gens = [gens[g] for g in order]
    allowed = [allowed[g] for g in order]
    d = len(gens)
    words = _Words(A, gens)
    nw = len(words.vectors)
    c = len(A.lower_central.terms) - 1
    lower = [lower_term(B, s) for s in range(1, c + 2)]          # lower[s - 1] = L2^s

    # free[s][g]: where generator g's image can still move once fixed modulo L2^(s+1)
    free = [list(allowed)] + [[subspace_intersection(a, lower[s]) for a in allowed] for s in range(1, c + 1)]
    # step[s][g]: representatives of (allowed ∩ L2^s) modulo (allowed ∩ L2^(s+1))
    step = {(s, g): free[s][g].extend_within(free[s - 1][g]) for s in range(1, c + 1) for g in range(d)}

    span_of: list[Subspace] = []
    for k in range(nw):
        rec = words.recipe[k]
        span_of.append(allowed[k] if rec is None else product_subspace(B, span_of[rec[0]], span_of[rec[1]]))
    move_cache: dict = {}

    def moves_for(state):
        if state not in move_cache:
            moves: list[Subspace] = []
            for k in range(nw):
                rec = words.recipe[k]
                if rec is None:
                    moves.append(free[state[k]][k])
                else:
                    g, par = rec
                    moves.append(product_subspace(B, free[state[g]][g], span_of[par])
                                 + product_subspace(B, span_of[g], moves[par]))
            move_cache[state] = moves
        return move_cache[state]

    # after slot (s, i) generators <= i are fixed modulo L2^(s+1), the rest modulo
    # L2^s; a relation is rechecked whenever the slack left for its residual shrinks
    slots = [(s, i) for s in range(1, c + 1) for i in range(d)]
    ready = []
    previous = [B.full()] * len(words.relations)
    for s, i in slots:
        moves = moves_for(tuple(s if g <= i else s - 1 for g in range(d)))
        todo = []
        for r, (a, b, terms, _w, _sup) in enumerate(words.relations):
            U = product_subspace(B, moves[a], span_of[b]) + product_subspace(B, span_of[a], moves[b])
            for k, _ in terms:
                U = U + moves[k]
            if U != previous[r]:
                todo.append((r, _annihilator(U)))
                previous[r] = U
        ready.append(todo)

    # first layer: for every characteristic S the images must grow span + S + L2²
    # exactly when the source generators grow the matching span in L1
    distinct = {}
    for (name, Sa), (_, Sb) in zip(ca, cb):
        key = Sa + A.derived
        if key not in distinct:
            distinct[key] = Sb + B.derived
    src_spans = list(distinct)
    grows = []
    cur = list(src_spans)
    for g in gens:
        grows.append(np.array([not U.contains(g) for U in cur]))
        cur = [Subspace.span(F, n, U.basis + (tuple(g),)) for U in cur]
    start_ann = [_annihilator(distinct[U]) for U in src_spans]

    C = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), v in B.table.items():
        col = np.array([int(x) for x in v], dtype=np.int64)
        C[i, j] = col
        C[j, i] = (-col) % p
    C2 = C.reshape(n, n * n)

    def br(x, y):
        return (y @ (x @ C2).reshape(n, n)) % p

    terms_np = [[(k, int(x)) for k, x in rel[2]] for rel in words.relations]
    rel_ab = [(rel[0], rel[1]) for rel in words.relations]
    recipe = words.recipe

    def word_images(gen_img):
        out = []
        for k in range(nw):
            rec = recipe[k]
            out.append(gen_img[k] if rec is None else br(out[rec[0]], out[rec[1]]))
        return out

    def relations_hold(gen_img, todo):
        if not todo:
            return True
        imgs = word_images(gen_img)
        for r, Q in todo:
            a, b = rel_ab[r]
            resid = -br(imgs[a], imgs[b])
            for k, x in terms_np[r]:
                resid = resid + x * imgs[k]
            if Q.shape[0] and np.any(Q @ (resid % p) % p):
                return False
        return True

    combos = {}

    def lambdas(k):
        if k not in combos:
            combos[k] = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64).reshape(p ** k, k)
        return combos[k]

    steps_np = {key: _ints(v, n) for key, v in step.items()}
    nodes = 0
    images = [np.zeros(n, dtype=np.int64) for _ in range(d)]

    def depth_first(t, anns):
        nonlocal nodes
        if t == len(slots):
            yield images
            return
        s, i = slots[t]
        base = images[i]
        D = steps_np[(s, i)]
        cand = (base + lambdas(D.shape[0]) @ D) % p
        ok = np.ones(len(cand), dtype=bool)
        if s == 1:
            for Q, want in zip(anns, grows[i]):
                if Q.shape[0] == 0:
                    hit = np.zeros(len(cand), dtype=bool)
                else:
                    hit = np.any((cand @ Q.T) % p, axis=1)
                ok &= hit == want
        for v in cand[ok]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"isomorphism search exceeded {budget} nodes")
            images[i] = v
            if relations_hold(images, ready[t]):
                if s == 1:
                    child = [_drop_direction(Q, Q @ v % p, p) if want else Q
                             for Q, want in zip(anns, grows[i])]
                else:
                    child = anns
                yield from depth_first(t + 1, child)
        images[i] = base

    inv_words = words.matrix.T.inverse()
    for gen_img in depth_first(0, start_ann):
        W = F.matrix([[int(x) for x in w] for w in word_images(gen_img)], n)
        P = W.T @ inv_words
        assert is_isomorphism(A, B, P), "search produced a non-isomorphism"
        yield P


def search_isomorphism(L1: LieAlgebra, L2: LieAlgebra, field: FieldSpec,
                       budget: int = DEFAULT_BUDGET, source: str = "", target: str = "") -> IsoWitness | None:
    """First isomorphism found over GF(p), or ``None`` when the search space is exhausted.

    ``None`` proves non-isomorphism over that prime field only. Rational
    inputs are reduced mod p (``BadPrime`` if p divides a denominator).
    """
    for P in iter_isomorphisms(L1, L2, field, budget):
        return IsoWitness(P, source, target)
    return None


def count_isomorphisms(L1: LieAlgebra, L2: LieAlgebra, field: FieldSpec, budget: int = DEFAULT_BUDGET) -> int:
    return sum(1 for _ in iter_isomorphisms(L1, L2, field, budget))
