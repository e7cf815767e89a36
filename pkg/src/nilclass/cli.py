"""Command-line front end: ``nilclass COMMAND [ARGS]``.

Algebras travel between commands as JSON documents (``nilclass/1``) or as
DSL text; input format is detected from the first character. Machine output
goes to stdout, diagnostics to stderr.

Exit codes: 0 success, 1 usage error, 2 invalid input algebra, 3 not
eligible for classification, 4 no or ambiguous catalog match, 5 internal
consistency failure.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
from typing import Sequence, TextIO

from .classify4 import classify
from .errors import (
    AmbiguousMatch,
    BadPrime,
    BudgetExceeded,
    ConsistencyError,
    DimensionMismatch,
    FieldMismatch,
    InvalidAlgebra,
    JacobiViolation,
    NoCatalogMatch,
    NotEligible,
    ParamOutOfRange,
    RouteMismatch,
    UnknownLabel,
)
from .exterior import exterior_center, exterior_square, is_capable, multiplier_dims
from .field_linalg import QQ, GF, FieldSpec, random_invertible
from .iso import DEFAULT_BUDGET, fingerprint, search_isomorphism
from .lie_core import LieAlgebra, change_basis, is_stem, jacobi_violations, validate
from .presentations import CATALOG, STEM_LABELS, catalog, emit, parse_presentation

FORMAT_VERSION = "nilclass/1"
DEFAULT_SEED = 0
COMMANDS = ("validate", "info", "classify", "capable", "exterior", "multiplier", "catalog", "iso", "convert")
_DOC_KEYS = {"format", "field", "dim", "labels", "brackets"}
_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INELIGIBLE, EXIT_NO_MATCH, EXIT_INTERNAL = range(6)


class UsageError(Exception):
    pass


class DocumentError(InvalidAlgebra):
    """A JSON algebra document that does not follow the schema."""


# -- documents ----------------------------------------------------------------

def to_document(L: LieAlgebra) -> dict:
    """The ``nilclass/1`` document of ``L``: sorted brackets, nonzero terms only."""
    F = L.field
    brackets = []
    for (i, j) in sorted(L.table):
        terms = [[k + 1, F.format(c)] for k, c in enumerate(L.table[(i, j)]) if c != 0]
        brackets.append([i + 1, j + 1, terms])
    return {"format": FORMAT_VERSION, "field": F.descriptor, "dim": L.dim,
            "labels": list(L.names), "brackets": brackets}


def dump_document(L: LieAlgebra) -> str:
    return json.dumps(to_document(L), indent=2)


def _parse_table(doc: dict) -> tuple[int, FieldSpec, dict, list | None]:
    unknown = set(doc) - _DOC_KEYS
    if unknown:
        raise DocumentError(f"unknown document fields: {sorted(unknown)}")
    missing = {"format", "field", "dim", "brackets"} - set(doc)
    if missing:
        raise DocumentError(f"missing document fields: {sorted(missing)}")
    if doc["format"] != FORMAT_VERSION:
        raise DocumentError(f"unsupported format {doc['format']!r}; expected {FORMAT_VERSION!r}")
    try:
        F = FieldSpec.from_descriptor(str(doc["field"]))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    n = doc["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DocumentError("dim must be a non-negative integer")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n:
            raise DocumentError(f"labels must be a list of {n} names")
        if not all(isinstance(s, str) and _LABEL.match(s) for s in labels) or len(set(labels)) != n:
            raise DocumentError("labels must be distinct identifiers")
    if not isinstance(doc["brackets"], list):
        raise DocumentError("brackets must be a list")
    table: dict[tuple[int, int], dict[int, object]] = {}
    for entry in doc["brackets"]:
        if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[2], list)):
            raise DocumentError(f"bracket entry {entry!r} is not [i, j, terms]")
        i, j, terms = entry
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j)) or not 1 <= i < j <= n:
            raise DocumentError(f"bracket indices ({i}, {j}) need 1 <= i < j <= {n}")
        if (i - 1, j - 1) in table:
            raise DocumentError(f"bracket ({i}, {j}) listed twice")
        vec: dict[int, object] = {}
        for term in terms:
            if not (isinstance(term, list) and len(term) == 2):
                raise DocumentError(f"term {term!r} is not [k, coefficient]")
            k, c = term
            if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= n:
                raise DocumentError(f"term index {k!r} outside 1..{n}")
            if not isinstance(c, str):
                raise DocumentError(f"coefficient {c!r} must be a string")
            if k - 1 in vec:
                raise DocumentError(f"bracket ({i}, {j}) lists index {k} twice")
            try:
                vec[k - 1] = F.parse(c)
            except (ValueError, BadPrime) as exc:
                raise DocumentError(str(exc)) from None
        table[(i - 1, j - 1)] = vec
    return n, F, table, labels


def load_document(text: str) -> LieAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("a document must be a JSON object")
    n, F, table, labels = _parse_table(doc)
    return validate(n, table, F, labels)


def _is_json(text: str) -> bool:
    return text.lstrip().startswith("{")


def read_algebra(text: str, field: FieldSpec | None = None) -> LieAlgebra:
    """JSON document or DSL text; ``field`` reduces rational input mod p."""
    if not text.strip():
        raise DocumentError("empty input")
    L = load_document(text) if _is_json(text) else parse_presentation(text)
    if field is not None and field != L.field:
        L = L.reduce(field)
    return L


def write_algebra(L: LieAlgebra, fmt: str) -> str:
    return dump_document(L) if fmt == "json" else emit(L, names=True)


# -- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        raise UsageError(message or "")


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.from_descriptor(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parser(command: str) -> _Parser:
    p = _Parser(prog=f"nilclass {command}", add_help=False)
    if command in ("validate", "info", "classify", "capable", "exterior", "multiplier", "convert"):
        p.add_argument("--field", type=_field)
    if command == "convert":
        p.add_argument("--format", choices=("json", "dsl"))
    if command == "catalog":
        p.add_argument("action", choices=("list", "build"))
        p.add_argument("label", nargs="?")
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--field", type=_field, default=QQ)
        p.add_argument("--format", choices=("json", "dsl"), default="json")
        p.add_argument("--shuffle", action="store_true", help="apply a seeded random basis change")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    if command == "iso":
        p.add_argument("action", choices=("check", "search"))
        p.add_argument("first", help="document path, or - for stdin")
        p.add_argument("second", help="document path, or - for stdin")
        p.add_argument("--field", type=_field)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    return p


# -- commands -----------------------------------------------------------------

def _dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def _cmd_validate(opts, stdin: str) -> tuple[str, int]:
    try:
        L = read_algebra(stdin, opts.field)
    except JacobiViolation as exc:
        report = {"valid": False,
                  "jacobi_violations": [[i + 1, j + 1, k + 1] for i, j, k, _ in exc.witnesses]}
        return _dumps(report), EXIT_INVALID
    assert not jacobi_violations(L)
    return _dumps({"valid": True, "dim": L.dim, "field": L.field.descriptor, "jacobi_violations": []}), EXIT_OK


def _cmd_info(opts, stdin: str) -> tuple[str, int]:
    L = read_algebra(stdin, opts.field)
    lower, upper = L.lower_central, L.upper_central
    info = {
        "dim": L.dim,
        "field": L.field.descriptor,
        "nilpotent": lower.nilpotent,
        "class": len(lower.terms) - 1 if lower.nilpotent else None,
        "derived_dim": L.derived.dim,
        "center_dim": L.center.dim,
        "lower_central": lower.dims,
        "upper_central": upper.dims,
        "stem": is_stem(L),
    }
    return _dumps(info), EXIT_OK


def _cmd_classify(opts, stdin: str) -> tuple[str, int]:
    return classify(read_algebra(stdin, opts.field)).to_json(), EXIT_OK


def _cmd_capable(opts, stdin: str) -> tuple[str, int]:
    return is_capable(read_algebra(stdin, opts.field)).to_json(), EXIT_OK


def _cmd_exterior(opts, stdin: str) -> tuple[str, int]:
    L = read_algebra(stdin, opts.field)
    model = exterior_square(L)
    zc = exterior_center(L, model)
    F = L.field
    return _dumps({
        "quotient_dim": model.quotient_dim,
        "exterior_center_dim": zc.dim,
        "exterior_center_basis": [[F.format(x) for x in v] for v in zc.basis],
    }), EXIT_OK


def _cmd_multiplier(opts, stdin: str) -> tuple[str, int]:
    ext, hom = multiplier_dims(read_algebra(stdin, opts.field))
    return _dumps({"exterior_route": ext, "homology_route": hom}), EXIT_OK


def _cmd_convert(opts, stdin: str) -> tuple[str, int]:
    L = read_algebra(stdin, opts.field)
    fmt = opts.format or ("dsl" if _is_json(stdin) else "json")
    return write_algebra(L, fmt), EXIT_OK


def _dim_formula(entry) -> str | int:
    if entry.param is None:
        return entry.dim(None)
    base, slope = entry.dim(0), entry.dim(1) - entry.dim(0)
    term = entry.param if slope == 1 else f"{slope}{entry.param}"
    return term if base == 0 else f"{base}+{term}"


def _cmd_catalog(opts, stdin: str) -> tuple[str, int]:
    if opts.action == "list":
        if opts.label is not None:
            raise UsageError("catalog list takes no label")
        rows = [{"label": e.label, "param": e.param, "min_param": e.min_param if e.param else None,
                 "dim": _dim_formula(e), "stem_family": e.label in STEM_LABELS}
                for e in CATALOG.values()]
        return _dumps(rows), EXIT_OK
    if opts.label is None:
        raise UsageError("catalog build needs a LABEL")
    try:
        L = catalog(opts.label, m=opts.m, n=opts.n, field=opts.field)
    except (UnknownLabel, ParamOutOfRange) as exc:
        raise UsageError(str(exc)) from None
    if opts.shuffle:
        L = change_basis(L, random_invertible(L.field, L.dim, random.Random(opts.seed)))
    return write_algebra(L, opts.format), EXIT_OK


def _read_path(path: str, stdin: str) -> str:
    if path == "-":
        return stdin
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _cmd_iso(opts, stdin: str) -> tuple[str, int]:
    if opts.first == "-" and opts.second == "-":
        raise UsageError("at most one document may come from stdin")
    L1 = read_algebra(_read_path(opts.first, stdin))
    L2 = read_algebra(_read_path(opts.second, stdin))
    if opts.action == "check":
        F = opts.field
        A, B = (L1.reduce(F), L2.reduce(F)) if F is not None else (L1, L2)
        if A.field != B.field:
            raise FieldMismatch(f"documents over {A.field.descriptor} and {B.field.descriptor}")
        fa, fb = fingerprint(A).as_dict(), fingerprint(B).as_dict()
        differ = [k for k in fa if fa[k] != fb[k]]
        return _dumps({"field": A.field.descriptor, "fingerprints_equal": not differ,
                       "differing_invariants": differ}), EXIT_OK
    F = opts.field or (L1.field if not L1.field.is_rational else GF(5))
    if F.is_rational:
        raise UsageError("iso search runs over a prime field; pass --field gf:P")
    if opts.budget < 1:
        raise UsageError("--budget must be positive")
    out = {"field": F.descriptor, "budget": opts.budget}
    if L1.dim != L2.dim:
        out.update(isomorphic=False, reason=f"dimensions differ ({L1.dim} vs {L2.dim})")
        return _dumps(out), EXIT_OK
    try:
        w = search_isomorphism(L1, L2, F, budget=opts.budget, source=opts.first, target=opts.second)
    except BudgetExceeded as exc:
        out.update(isomorphic=None, reason=str(exc))
        return _dumps(out), EXIT_OK
    out["isomorphic"] = w is not None
    if w is not None:
        out["witness"] = w.to_dict()
    return _dumps(out), EXIT_OK


_HANDLERS = {
    "validate": _cmd_validate, "info": _cmd_info, "classify": _cmd_classify,
    "capable": _cmd_capable, "exterior": _cmd_exterior, "multiplier": _cmd_multiplier,
    "catalog": _cmd_catalog, "iso": _cmd_iso, "convert": _cmd_convert,
}


def run(command: str, args: Sequence[str], stdin: str = "", stderr: TextIO | None = None) -> tuple[str, int]:
    """Execute one command; returns ``(stdout text, exit code)``.

    Diagnostics are written to ``stderr`` (default ``sys.stderr``).
    """
    err = stderr if stderr is not None else sys.stderr

    def fail(code: int, message: str, extra: dict | None = None) -> tuple[str, int]:
        print(f"nilclass {command}: {message}", file=err)
        if extra:
            print(json.dumps(extra, indent=2, default=str), file=err)
        return "", code

    if command not in _HANDLERS:
        return fail(EXIT_USAGE, f"unknown command; choose from {', '.join(COMMANDS)}")
    try:
        opts = _parser(command).parse_args(list(args))
        return _HANDLERS[command](opts, stdin)
    except UsageError as exc:
        return fail(EXIT_USAGE, str(exc).strip() or "usage error")
    except NotEligible as exc:
        return fail(EXIT_INELIGIBLE, f"not eligible: {exc}")
    except NoCatalogMatch as exc:
        return fail(EXIT_NO_MATCH, f"no catalog match: {exc}", exc.diagnostics)
    except AmbiguousMatch as exc:
        return fail(EXIT_NO_MATCH, f"ambiguous match: {exc}", {"candidates": list(exc.candidates)})
    except (RouteMismatch, ConsistencyError) as exc:
        return fail(EXIT_INTERNAL, f"internal consistency failure: {exc}")
    except (InvalidAlgebra, FieldMismatch, BadPrime, DimensionMismatch) as exc:
        return fail(EXIT_INVALID, f"invalid algebra: {exc}")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help", "help"):
        print(__doc__.strip())
        print("\ncommands: " + ", ".join(COMMANDS))
        return EXIT_OK if argv else EXIT_USAGE
    command, rest = argv[0], argv[1:]
    reads_stdin = command in ("validate", "info", "classify", "capable", "exterior", "multiplier", "convert") \
        or (command == "iso" and "-" in rest)
    stdin = sys.stdin.read() if reads_stdin else ""
    out, code = run(command, rest, stdin)
    if out:
        sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
