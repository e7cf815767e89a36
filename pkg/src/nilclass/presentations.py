"""Bracket-presentation DSL and the named catalog of algebras.

The DSL is line oriented; ``;`` also separates statements::

    dim 5                      # or: gens x1 x2 x3 a b
    [x1,x2] = x3
    [x1,x3] = [x2,x4] = x5     # chained left sides share one value
    [x1,x4] = x5 - 2/3*x3

Unlisted basis brackets are zero. An optional ``field gf:P`` statement
fixes the ground field when none is passed in.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import (
    InconsistentRelation,
    ParamOutOfRange,
    PresentationSyntaxError,
    UnknownGenerator,
    UnknownLabel,
)
from .field_linalg import QQ, FieldSpec
from .lie_core import LieAlgebra, validate

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_NUMBER = re.compile(r"\d+(?:/\d+)?")


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[tuple[str, str], tuple[tuple[str, str], ...]], ...]
    field: FieldSpec | None = None


class _Cursor:
    def __init__(self, text: str, line: int, col0: int):
        self.text, self.pos, self.line, self.col0 = text, 0, line, col0

    def error(self, message: str):
        return PresentationSyntaxError(message, self.line, self.col0 + self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of statement"
            raise self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def match(self, pattern: re.Pattern, what: str) -> str:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def at_end(self) -> bool:
        return self.peek() == ""


def _statements(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        start = 0
        for piece in line.split(";"):
            if piece.strip():
                yield lineno, start, piece
            start += len(piece) + 1


def _parse_bracket(cur: _Cursor) -> tuple[str, str, int]:
    col = cur.pos
    cur.expect("[")
    g = cur.match(_IDENT, "generator name")
    cur.expect(",")
    h = cur.match(_IDENT, "generator name")
    cur.expect("]")
    return g, h, col


def _parse_expr(cur: _Cursor) -> list[tuple[str, str, int]]:
    """Terms as ``(coefficient literal, generator or '', column)``."""
    terms = []
    sign = ""
    if cur.peek() in ("+", "-"):
        sign = "-" if cur.text[cur.pos] == "-" else ""
        cur.pos += 1
    while True:
        cur.skip_ws()
        col = cur.pos
        if cur.peek().isdigit():
            coef = cur.match(_NUMBER, "coefficient")
            if cur.peek() == "*":
                cur.pos += 1
                gen = cur.match(_IDENT, "generator name")
            else:
                if coef != "0":
                    raise cur.error("a nonzero scalar needs '*generator'")
                gen = ""
        else:
            coef = "1"
            gen = cur.match(_IDENT, "generator name or coefficient")
        terms.append((sign + coef, gen, col))
        nxt = cur.peek()
        if nxt in ("+", "-") and nxt:
            sign = "-" if nxt == "-" else ""
            cur.pos += 1
            continue
        if nxt:
            raise cur.error(f"unexpected {nxt!r}")
        return terms


def parse(text: str) -> Presentation:
    """Parse DSL text into a :class:`Presentation` (no algebra checks yet)."""
    gens: list[str] | None = None
    field: FieldSpec | None = None
    relations = []
    for lineno, col0, stmt in _statements(text):
        cur = _Cursor(stmt, lineno, col0)
        head = cur.peek()
        if head == "[":
            if gens is None:
                raise cur.error("relations must follow a 'dim' or 'gens' header")
            lefts = [_parse_bracket(cur)]
            cur.expect("=")
            while cur.peek() == "[":
                lefts.append(_parse_bracket(cur))
                cur.expect("=")
            terms = _parse_expr(cur)
            for g, h, col in lefts:
                for name in (g, h):
                    if name not in gens:
                        raise UnknownGenerator(f"line {lineno}: unknown generator {name!r}")
            for _, gen, col in terms:
                if gen and gen not in gens:
                    raise UnknownGenerator(f"line {lineno}: unknown generator {gen!r}")
            rhs = tuple((c, g) for c, g, _ in terms if g)
            relations.extend(((g, h), rhs) for g, h, _ in lefts)
            continue
        word = cur.match(_IDENT, "'dim', 'gens', 'field' or a relation")
        if word == "dim":
            if gens is not None:
                raise cur.error("duplicate header")
            n = int(cur.match(re.compile(r"\d+"), "dimension"))
            gens = [f"x{i + 1}" for i in range(n)]
        elif word == "gens":
            if gens is not None:
                raise cur.error("duplicate header")
            gens = []
            while not cur.at_end():
                name = cur.match(_IDENT, "generator name")
                if name in gens:
                    raise cur.error(f"duplicate generator {name!r}")
                gens.append(name)
        elif word == "field":
            try:
                field = FieldSpec.from_descriptor(cur.match(re.compile(r"\S+"), "field descriptor"))
            except ValueError as exc:
                raise cur.error(str(exc)) from None
        else:
            raise PresentationSyntaxError(f"unknown statement {word!r}", lineno, col0 + 1)
        if not cur.at_end():
            raise cur.error(f"unexpected {cur.peek()!r}")
    if gens is None:
        raise PresentationSyntaxError("missing 'dim' or 'gens' header", 1, 1)
    return Presentation(tuple(gens), tuple(relations), field)


def to_algebra(pres: Presentation, field: FieldSpec | None = None) -> LieAlgebra:
    F = field or pres.field or QQ
    index = {g: i for i, g in enumerate(pres.generators)}
    n = len(index)
    table: dict[tuple[int, int], tuple] = {}
    for (g, h), rhs in pres.relations:
        vec = [F.zero] * n
        for coef, gen in rhs:
            vec[index[gen]] += F.parse(coef)
        i, j = index[g], index[h]
        if i == j:
            if any(x != 0 for x in vec):
                raise InconsistentRelation(f"[{g},{g}] must be 0 by alternation")
            continue
        if i > j:
            i, j, vec = j, i, [-x for x in vec]
        vec = tuple(vec)
        if (i, j) in table and table[(i, j)] != vec:
            raise InconsistentRelation(f"[{g},{h}] is assigned two different values")
        table[(i, j)] = vec
    return validate(n, table, F, pres.generators)


def parse_presentation(text: str, field: FieldSpec | None = None) -> LieAlgebra:
    """DSL text to a validated algebra; generator order is basis order."""
    return to_algebra(parse(text), field)


def _format_vector(v, names) -> str:
    parts = []
    for x, name in zip(v, names):
        if x == 0:
            continue
        s = str(x)
        neg = s.startswith("-")
        mag = s[1:] if neg else s
        term = name if mag == "1" else f"{mag}*{name}"
        if parts:
            parts.append(("-" if neg else "+") + term)
        else:
            parts.append(("-" if neg else "") + term)
    return "".join(parts)


def emit(L: LieAlgebra, names: bool = False) -> str:
    """DSL text for ``L``; ``parse_presentation(emit(L))`` reproduces the table.

    With ``names=True`` the generator names are kept via a ``gens`` header.
    The field is recorded only when it is not the rationals.
    """
    use = L.names if names else tuple(f"x{i + 1}" for i in range(L.dim))
    parts = [("gens " + " ".join(use)) if names else f"dim {L.dim}"]
    if not L.field.is_rational:
        parts.append(f"field {L.field.descriptor}")
    for (i, j) in sorted(L.table):
        parts.append(f"[{use[i]},{use[j]}]={_format_vector(L.table[(i, j)], use)}")
    return "; ".join(parts)


# -- catalog ----------------------------------------------------------------

_L4_3 = "[x1,x2]=x3; [x1,x3]=x4"
_L5_5 = "[x1,x2]=x3; [x1,x3]=x5; [x2,x4]=x5"
_L5_6 = "[x1,x2]=x3; [x1,x3]=x4; [x1,x4]=x5; [x2,x3]=x5"
_L5_7 = "[x1,x2]=x3; [x1,x3]=x4; [x1,x4]=x5"
_L6_11 = "[x1,x2]=x3; [x1,x3]=x4; [x1,x4]=[x2,x3]=[x2,x5]=x6"
_L6_12 = "[x1,x2]=x3; [x1,x3]=x4; [x1,x4]=[x2,x5]=x6"
_L6_13 = "[x1,x2]=x3; [x1,x3]=[x2,x4]=x5; [x1,x5]=[x3,x4]=x6"
_L6_15 = "[x1,x2]=x3; [x1,x3]=x4; [x1,x4]=[x2,x3]=x5; [x1,x5]=[x2,x4]=x6"
_L6_18 = "[x1,x2]=x3; [x1,x3]=x4; [x1,x4]=x5; [x1,x5]=x6"
# Seven-dimensional stem algebra T/Z(T) of type L5_5 + A(1); also the semidirect build on L6_13.
_T_N = "[x1,x2]=x3; [x1,x3]=[x2,x4]=x5; [x1,x5]=[x3,x4]=[x2,x7]=[x4,x7]=x6"
# Chain [x1,x_i]=x_(i+1) read for i = 2..4; the remaining relations literally.
_L7_NC = ("[x1,x2]=x3; [x1,x3]=x4; [x1,x4]=x5; "
          "[x2,x6]=x4; [x3,x6]=[x2,z]=[x6,z]=x5")
_H7_COVER = "[x1,x2]=x3; [x1,x3]=[x2,x7]=x4; [x1,x4]=[x3,x7]=x5; [x1,x5]=[x4,x7]=x6"


def _named(n: int, relations: str, extra: tuple[str, ...] = ()) -> str:
    return "gens " + " ".join([f"x{i + 1}" for i in range(n)] + list(extra)) + "; " + relations


def _with_heisenberg(n: int, relations: str, m: int, center: str) -> str:
    """Central product of a presented algebra with H(m), amalgamating ``center``.

    The Heisenberg pairs are named ``a, b`` when ``m == 1`` and ``a1, b1, ...`` otherwise.
    """
    pairs = [("a", "b")] if m == 1 else [(f"a{l}", f"b{l}") for l in range(1, m + 1)]
    extra = tuple(name for pair in pairs for name in pair)
    rels = relations + "".join(f"; [{a},{b}]={center}" for a, b in pairs)
    return _named(n, rels, extra)


def heisenberg_text(m: int) -> str:
    gens = [name for l in range(1, m + 1) for name in (f"a{l}", f"b{l}")] + ["z"]
    rels = "".join(f"; [a{l},b{l}]=z" for l in range(1, m + 1))
    return "gens " + " ".join(gens) + rels


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    param: str | None            # "m", "n" or None
    min_param: int
    text: Callable[[int | None], str]
    dim: Callable[[int | None], int]
    family: str | None = None    # family letter a..r for stem entries


def _fixed(label, n, rels, family=None, extra=()):
    return CatalogEntry(label, None, 0, lambda _p, n=n, r=rels, e=extra: _named(n, r, e),
                        lambda _p, d=n + len(extra): d, family)


def _hfam(label, n, rels, center, min_m, family):
    return CatalogEntry(label, "m", min_m,
                        lambda m, n=n, r=rels, c=center: _with_heisenberg(n, r, m, c),
                        lambda m, n=n: n + 2 * m, family)


_ENTRIES = [
    CatalogEntry("A", "n", 0, lambda n: f"dim {n}", lambda n: n),
    CatalogEntry("H", "m", 1, heisenberg_text, lambda m: 2 * m + 1),
    _fixed("L4_3", 4, _L4_3),
    _fixed("L5_5", 5, _L5_5),
    _fixed("L5_6", 5, _L5_6),
    _fixed("L5_7", 5, _L5_7),
    _fixed("L6_11", 6, _L6_11),
    _fixed("L6_12", 6, _L6_12),
    _fixed("L6_13", 6, _L6_13),
    _fixed("L6_15", 6, _L6_15),
    _fixed("L6_18", 6, _L6_18),
    _fixed("L7_NC", 6, _L7_NC, extra=("z",)),
    _fixed("H7_cover", 7, _H7_COVER),
    _fixed("T_a", 5, _L5_6, "a"),
    _fixed("T_b", 5, _L5_7, "b"),
    _fixed("T_c", 6, _L6_11, "c"),
    _fixed("T_d", 6, _L6_12, "d"),
    CatalogEntry("T_e", None, 0, lambda _p: _with_heisenberg(5, _L5_6, 1, "x5"), lambda _p: 7, "e"),
    CatalogEntry("T_f", None, 0, lambda _p: _with_heisenberg(5, _L5_7, 1, "x5"), lambda _p: 7, "f"),
    _hfam("T_g", 5, _L5_6, "x5", 2, "g"),
    _hfam("T_h", 5, _L5_7, "x5", 2, "h"),
    _hfam("T_k", 6, _L6_11, "x6", 1, "k"),
    _hfam("T_l", 6, _L6_12, "x6", 1, "l"),
    _fixed("T_m", 6, _L6_13, "m"),
    _fixed("T_n", 7, _T_N, "n"),
    CatalogEntry("T_p", None, 0, lambda _p: _with_heisenberg(6, _L6_13, 1, "x6"), lambda _p: 8, "p"),
    _hfam("T_q", 6, _L6_13, "x6", 2, "q"),
    _hfam("T_r", 7, _T_N, "x6", 1, "r"),
]

CATALOG: dict[str, CatalogEntry] = {e.label: e for e in _ENTRIES}

STEM_LABELS = tuple(e.label for e in _ENTRIES if e.family is not None)
"""The fifteen stem families of class 4 with three-dimensional derived algebra."""


def catalog_labels() -> list[str]:
    return list(CATALOG)


def catalog(label: str, m: int | None = None, n: int | None = None,
            field: FieldSpec = QQ) -> LieAlgebra:
    """Build a named algebra; ``m`` for Heisenberg-type families, ``n`` for ``A``."""
    try:
        entry = CATALOG[label]
    except KeyError:
        raise UnknownLabel(f"unknown catalog label {label!r}") from None
    if entry.param is None:
        if m is not None or n is not None:
            raise ParamOutOfRange(f"{label} takes no parameter")
        value = None
    else:
        value = m if entry.param == "m" else n
        other = n if entry.param == "m" else m
        if other is not None:
            raise ParamOutOfRange(f"{label} takes only {entry.param}")
        if value is None:
            raise ParamOutOfRange(f"{label} requires {entry.param}")
        if value < entry.min_param:
            raise ParamOutOfRange(f"{label} requires {entry.param} >= {entry.min_param}")
    return parse_presentation(entry.text(value), field)
