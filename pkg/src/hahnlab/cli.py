"""Command line front end.

Exit codes, uniformly:
  0   verified / structurally verified / true / member
  1   repro assertion mismatch
  2   refuted / false / not a member / hypothesis refuted / infinite expansion
  3   inconclusive: window-bounded only, or membership not certified
  64  malformed input or violated precondition

Reports go to stdout as canonical JSON (byte-identical for identical inputs);
anything that varies between runs, like timing, goes to stderr.

JSON-valued flags accept either an inline JSON document or @path to read one
from a file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional

from .errors import (
    HahnlabError,
    HypothesisError,
    InfiniteExpansionError,
    InputFormatError,
)
from .groups import GroupElement, GroupSpec, Window, default_window, element_from_json
from .kronecker import (
    MEMBER,
    NOT_MEMBER,
    CoordinateValuation,
    RatFunc,
    in_kr_nagata_intersection,
)
from .monoids import (
    VERIFIED_STRUCTURALLY,
    WindowBounded,
    check_max_excluding,
    construct_excluding_monoid,
    expr_from_json,
    member,
    root_closure,
)
from .reports import build_report, emit
from .rings import ring_from_json
from .scenarios import REPRO
from .series import FieldSpec, invert, member_ring, series_from_json
from . import __version__

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_REFUTED = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64


def _load_doc(text: str):
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError("not valid JSON: %s" % (exc,)) from exc


def _parse_field(text: Optional[str]) -> FieldSpec:
    if text is None or text == "Q":
        return FieldSpec("Q")
    if text.startswith("F"):
        try:
            return FieldSpec("Fp", int(text[1:]))
        except ValueError as exc:
            raise InputFormatError("bad field %r (use Q or F<p>)" % (text,)) from exc
    raise InputFormatError("bad field %r (use Q or F<p>)" % (text,))


def _group_of(args) -> GroupSpec:
    return GroupSpec.from_json(_load_doc(args.group))


def _window_of(args, spec: GroupSpec, include=()) -> Window:
    if getattr(args, "window", None):
        return Window.parse_compact(spec, args.window)
    return default_window(spec, include=include)


def _emit(args, command: str, inputs, result) -> None:
    sys.stdout.write(emit(build_report(command, inputs, result), args.json_out))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_member(args) -> int:
    spec = _group_of(args)
    S = expr_from_json(spec, _load_doc(args.monoid))
    g = element_from_json(spec, _load_doc(args.element))
    ok = member(S, g)
    inputs = {"group": spec.to_json(), "monoid": S.to_json(), "element": g.to_json()}
    _emit(args, "member", inputs, {"member": ok})
    return EXIT_OK if ok else EXIT_REFUTED


def _cmd_check_maxexcl(args) -> int:
    spec = _group_of(args)
    S = expr_from_json(spec, _load_doc(args.monoid))
    a = element_from_json(spec, _load_doc(args.element))
    w = _window_of(args, spec, include=(a,))
    verdict = check_max_excluding(S, a, w)
    inputs = {
        "group": spec.to_json(),
        "monoid": S.to_json(),
        "element": a.to_json(),
        "window": w.to_json(),
    }
    _emit(args, "check-maxexcl", inputs, verdict.to_json())
    if verdict.status == "refuted":
        return EXIT_REFUTED
    if verdict.status == VERIFIED_STRUCTURALLY:
        return EXIT_OK
    return EXIT_INCONCLUSIVE


def _cmd_construct_s1(args) -> int:
    spec = _group_of(args)
    a = element_from_json(spec, _load_doc(args.element))
    tail = [expr_from_json(spec, t) for t in _load_doc(args.tail)]
    star = expr_from_json(spec, _load_doc(args.star)) if args.star else None
    w = _window_of(args, spec, include=(a,))
    inputs = {
        "group": spec.to_json(),
        "element": a.to_json(),
        "tail": [t.to_json() for t in tail],
        "star": None if star is None else star.to_json(),
        "window": w.to_json(),
    }
    try:
        node = construct_excluding_monoid(a, tail, star=star, window=w)
    except HypothesisError as exc:
        witness = exc.witness
        if isinstance(witness, tuple):
            witness_json = [x.to_json() for x in witness]
        elif isinstance(witness, GroupElement):
            witness_json = witness.to_json()
        else:
            witness_json = None
        _emit(
            args,
            "construct-s1",
            inputs,
            {"ok": False, "error": "hypothesis_refuted", "message": str(exc), "witness": witness_json},
        )
        return EXIT_REFUTED
    _emit(args, "construct-s1", inputs, {"ok": True, "monoid": node.to_json()})
    return EXIT_OK


def _cmd_closure(args) -> int:
    spec = _group_of(args)
    S = expr_from_json(spec, _load_doc(args.monoid))
    w = _window_of(args, spec)
    closed = root_closure(S, w, nmax=args.nmax)
    bounded = isinstance(closed, WindowBounded)
    inputs = {
        "group": spec.to_json(),
        "monoid": S.to_json(),
        "window": w.to_json(),
        "nmax": args.nmax,
    }
    _emit(args, "closure", inputs, {"closure": closed.to_json(), "window_bounded": bounded})
    return EXIT_INCONCLUSIVE if bounded else EXIT_OK


def _cmd_series(args) -> int:
    spec = _group_of(args)
    f = series_from_json(spec, _load_doc(args.series))
    inputs = {"group": spec.to_json(), "op": args.op, "series": f.to_json()}
    if args.op in ("mul", "add"):
        if not args.series2:
            raise InputFormatError("--series2 is required for op %r" % (args.op,))
        g = series_from_json(spec, _load_doc(args.series2))
        inputs["series2"] = g.to_json()
        out = f * g if args.op == "mul" else f + g
        _emit(args, "series", inputs, {"series": out.to_json()})
        return EXIT_OK
    if args.op == "invert":
        trunc = None
        if args.trunc:
            trunc = element_from_json(spec, _load_doc(args.trunc))
            inputs["trunc"] = trunc.to_json()
        inputs["term_budget"] = args.term_budget
        try:
            out = invert(f, trunc, term_budget=args.term_budget)
        except InfiniteExpansionError as exc:
            _emit(
                args,
                "series",
                inputs,
                {"error": "infinite_expansion", "message": str(exc)},
            )
            return EXIT_REFUTED
        _emit(args, "series", inputs, {"series": out.to_json()})
        return EXIT_OK
    if args.op == "member-ring":
        if not args.monoid:
            raise InputFormatError("--monoid is required for op 'member-ring'")
        S = expr_from_json(spec, _load_doc(args.monoid))
        inputs["monoid"] = S.to_json()
        ok = member_ring(f, S)
        _emit(args, "series", inputs, {"member": ok})
        return EXIT_OK if ok else EXIT_REFUTED
    raise InputFormatError("unknown series op %r" % (args.op,))


def _cmd_kron_member(args) -> int:
    spec = _group_of(args)
    field = _parse_field(args.field)
    phi = RatFunc.from_json(spec, field, _load_doc(args.phi))
    family = [CoordinateValuation.from_json(spec, v) for v in _load_doc(args.family)]
    ring = ring_from_json(spec, _load_doc(args.ring))
    verdict = in_kr_nagata_intersection(phi, family, ring)
    inputs = {
        "group": spec.to_json(),
        "field": field.to_json(),
        "phi": phi.to_json(),
        "family": [v.to_json() for v in family],
        "ring": ring.to_json(),
    }
    _emit(args, "kron-member", inputs, verdict.to_json())
    if verdict.status == MEMBER:
        return EXIT_OK
    if verdict.status == NOT_MEMBER:
        return EXIT_REFUTED
    return EXIT_INCONCLUSIVE


def _cmd_repro(args) -> int:
    runner = REPRO[args.id]
    report, inputs = runner()
    if args.emit_inputs:
        os.makedirs(args.emit_inputs, exist_ok=True)
        for name, payload in sorted(inputs.items()):
            path = os.path.join(args.emit_inputs, "%s_%s.json" % (args.id, name))
            with open(path, "w", encoding="ascii") as fh:
                fh.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
    _emit(args, "repro", inputs, report)
    return EXIT_OK if report["passed"] else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hahnlab",
        description="Monoid-graded series rings over ordered groups of finite rank.",
    )
    top.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, window=True):
        p.add_argument("--json-out", help="also write the report to this file")
        if window:
            p.add_argument(
                "--window",
                help="window box, e.g. '-2:8' (Z), '0:3/2' (Q), '-6:6;-6:6' "
                "(quadratic), components joined by 'x'",
            )

    p = sub.add_parser("member", help="exact monoid membership of one element")
    p.add_argument("--group", required=True)
    p.add_argument("--monoid", required=True)
    p.add_argument("--element", required=True)
    common(p, window=False)
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser(
        "check-maxexcl",
        help="symmetry check: is the monomial ring maximal excluding X^a",
    )
    p.add_argument("--group", required=True)
    p.add_argument("--monoid", required=True)
    p.add_argument("--element", required=True, help="the excluded exponent a")
    common(p)
    p.set_defaults(func=_cmd_check_maxexcl)

    p = sub.add_parser(
        "construct-s1",
        help="assemble the symmetric monoid excluding a from tail strata",
    )
    p.add_argument("--group", required=True)
    p.add_argument("--element", required=True, help="the excluded exponent a")
    p.add_argument("--tail", required=True, help="JSON list of tail stratum expressions")
    p.add_argument("--star", help="optional extra first-stratum set")
    common(p)
    p.set_defaults(func=_cmd_construct_s1)

    p = sub.add_parser("closure", help="root closure of a monoid expression")
    p.add_argument("--group", required=True)
    p.add_argument("--monoid", required=True)
    p.add_argument("--nmax", type=int, default=8, help="largest root exponent tried")
    common(p)
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("series", help="series arithmetic, inversion, ring membership")
    p.add_argument("--group", required=True)
    p.add_argument("--op", required=True, choices=("invert", "mul", "add", "member-ring"))
    p.add_argument("--series", required=True)
    p.add_argument("--series2")
    p.add_argument("--monoid")
    p.add_argument("--trunc", help="truncation exponent for invert")
    p.add_argument("--term-budget", type=int, default=100_000)
    common(p, window=False)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser(
        "kron-member",
        help="membership in (extension family ring) intersect Nagata ring",
    )
    p.add_argument("--group", required=True)
    p.add_argument("--field", default="Q", help="Q (default) or F<p>")
    p.add_argument("--phi", required=True, help="fraction JSON {num, den}")
    p.add_argument("--family", required=True, help="JSON list of {'perm': [...]}")
    p.add_argument("--ring", required=True, help="ring descriptor JSON")
    common(p, window=False)
    p.set_defaults(func=_cmd_kron_member)

    p = sub.add_parser("repro", help="run a pinned worked example end to end")
    p.add_argument("id", choices=sorted(REPRO))
    p.add_argument("--emit-inputs", help="directory to dump the example's inputs as JSON")
    common(p, window=False)
    p.set_defaults(func=_cmd_repro)

    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        code = args.func(args)
    except HahnlabError as exc:
        sys.stderr.write("error: %s\n" % (exc,))
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write("io error: %s\n" % (exc,))
        return EXIT_USAGE
    finally:
        sys.stderr.write("elapsed_ms=%d\n" % int((time.monotonic() - started) * 1000))
    return code


if __name__ == "__main__":
    sys.exit(main())
