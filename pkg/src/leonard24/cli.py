"""Command-line front end.

Exit codes: 0 everything passed, 1 a mathematical check failed, 2 usage,
I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence

from . import __version__
from .dagger import anchor_vectors, compute_gram, verify_scalar_lemmas
from .field import Field, FieldError, PrimeField, QQ
from .identities import verify_all_identities
from .leonard import (LeonardSystem, LeonardSystemError, ParameterArray, ParameterArrayError,
                      from_split_form, parameter_array, validate_system)
from .matrix import Vector, is_basis
from .relatives import ELEMENTS, apply, transform_parameter_array
from .transition import (ALL_TAGS, BasisTag, TransitionContext, composition_coherence, formula,
                         identity_coherence, rescaled_inputs, verify_all)

SCHEMA = "leonard24.verify/1"
SUITES = ("axioms", "bases", "d4", "identities", "scalar", "transitions")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


# ---------------------------------------------------------------------------
# input

def _parse_field(spec) -> Field:
    if spec == "rational":
        return QQ
    if isinstance(spec, dict) and set(spec) == {"prime"} and isinstance(spec["prime"], int):
        try:
            return PrimeField(spec["prime"])
        except FieldError as e:
            raise InputError(str(e)) from e
    raise InputError(f'field must be "rational" or {{"prime": p}}, got {spec!r}')


def _parse_list(data: dict, key: str, field: Field, length: int) -> list:
    value = data[key]
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise InputError(f"{key} must be an array of scalar strings")
    if len(value) != length:
        raise InputError(f"{key} has {len(value)} entries, expected {length} for d = {data['d']}")
    try:
        return [field.parse(x) for x in value]
    except FieldError as e:
        raise InputError(f"{key}: {e}") from e


def load_parameter_file(path: str) -> ParameterArray:
    """Read a parameter-array JSON file.

    Raises :class:`InputError` for anything wrong with the file itself and
    :class:`ParameterArrayError` when the array breaks an invariant.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise InputError("top level must be an object")
    missing = [k for k in ("d", "field", "theta", "theta_star", "varphi") if k not in data]
    if missing:
        raise InputError(f"missing key(s): {', '.join(missing)}")
    d = data["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise InputError("d must be a nonnegative integer")
    f = _parse_field(data["field"])
    theta = _parse_list(data, "theta", f, d + 1)
    theta_star = _parse_list(data, "theta_star", f, d + 1)
    varphi = _parse_list(data, "varphi", f, d)
    phi = _parse_list(data, "phi", f, d) if data.get("phi") is not None else None
    return ParameterArray(theta, theta_star, varphi, phi, f)


def _parse_seed(text: Optional[str], f: Field, n: int) -> Optional[Vector]:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != n:
        raise InputError(f"--seed-anchors needs {n} comma-separated entries, got {len(parts)}")
    try:
        return Vector([f.parse(p) for p in parts], f)
    except FieldError as e:
        raise InputError(f"--seed-anchors: {e}") from e


def _fmt(x, f: Field) -> str:
    return f.format(x)


def _print_array(pa: ParameterArray, out) -> None:
    f = pa.field
    for key in ("theta", "theta_star", "varphi", "phi"):
        seq = getattr(pa, key)
        print(f"  {key:<10} = [{', '.join(_fmt(x, f) for x in seq)}]", file=out)


# ---------------------------------------------------------------------------
# suites

@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: List[str] = dc_field(default_factory=list)
    notes: List[str] = dc_field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, name: str, ok: bool) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(name)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": self.checks,
                "failures": self.failures, "notes": self.notes,
                "seconds": round(self.seconds, 3)}


def _suite_axioms(sys_: LeonardSystem, res: SuiteResult, **_) -> None:
    rep = validate_system(sys_.A, sys_.Astar, sys_.theta, sys_.theta_star)
    for c in rep.checks:
        res.record(c.name, c.passed)
    pa = parameter_array(sys_)
    res.record("phi nonzero", all(pa.phi))


def _suite_bases(sys_: LeonardSystem, res: SuiteResult, anchors, **_) -> None:
    for tag in sorted(ALL_TAGS, key=lambda t: t.name):
        fam = {"E": sys_.E, "Es": sys_.Estar}.get(tag.family)
        if fam is None:
            fam = [getattr(sys_, {"tauA": "tau_A", "etaA": "eta_A", "tauAs": "tau_As",
                                  "etaAs": "eta_As"}[tag.family])(i) for i in range(sys_.d + 1)]
        if tag.reversed:
            fam = fam[::-1]
        v = getattr(anchors, tag.anchor)
        res.record(tag.name, is_basis([X @ v for X in fam]))


def _suite_d4(sys_: LeonardSystem, res: SuiteResult, **_) -> None:
    pa = parameter_array(sys_)
    for g in ELEMENTS:
        res.record(f"parameter array of {g.symbol}",
                   parameter_array(apply(g, sys_)) == transform_parameter_array(g, pa))
    for a in ELEMENTS:
        for b in ELEMENTS:
            lhs = apply(b, apply(a, sys_))
            res.record(f"({a.name})({b.name}) composition", lhs.same_as(apply(a.then(b), sys_)))


def _suite_identities(sys_: LeonardSystem, res: SuiteResult, **_) -> None:
    for rep in verify_all_identities(sys_):
        res.record(rep.name, rep.passed)


def _suite_scalar(sys_: LeonardSystem, res: SuiteResult, gram, anchors, **_) -> None:
    for c in verify_scalar_lemmas(sys_, gram, anchors):
        res.record(c.name, c.passed)
        if c.name == "eq:trEsrE0":
            res.notes.append(f"eq:trEsrE0 reading probe: {c.detail}")


def _suite_transitions(sys_: LeonardSystem, res: SuiteResult, gram, anchors, rescale=False,
                       **_) -> None:
    ctx = TransitionContext(sys_, gram, anchors)
    rep = verify_all(sys_, gram, anchors, ctx=ctx)
    for r in rep.results:
        res.record(f"{r.source.name} -> {r.target.name}: {r.label}", r.passed)
    res.notes.append(f"{rep.matches}/{rep.total} transition formulas match the oracle")
    for tag, ok in identity_coherence(ctx).items():
        res.record(f"identity {tag.name}", ok)
    for u, v, w, ok in composition_coherence(ctx, 100, seed=0):
        res.record(f"composition {u.name} -> {v.name} -> {w.name}", ok)
    if rescale:
        g2, a2 = rescaled_inputs(gram, anchors, seed=1)
        rep2 = verify_all(sys_, g2, a2)
        res.record("rescaled anchors and form give identical verdicts", rep2.verdicts == rep.verdicts)


_SUITE_FUNCS = {"axioms": _suite_axioms, "bases": _suite_bases, "d4": _suite_d4,
                "identities": _suite_identities, "scalar": _suite_scalar,
                "transitions": _suite_transitions}


def run_suites(sys_: LeonardSystem, suites: Sequence[str], seed: Optional[Vector] = None,
               rescale: bool = False) -> List[SuiteResult]:
    gram = compute_gram(sys_)
    anchors = _anchors(sys_, seed)
    out = []
    for name in SUITES:
        if name not in suites:
            continue
        res = SuiteResult(name)
        t0 = time.perf_counter()
        _SUITE_FUNCS[name](sys_, res, gram=gram, anchors=anchors, rescale=rescale)
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out


# ---------------------------------------------------------------------------
# commands

def _anchors(sys_: LeonardSystem, seed: Optional[Vector]):
    try:
        return anchor_vectors(sys_, seed)
    except LeonardSystemError as e:
        raise InputError(f"--seed-anchors: {e}") from e


def cmd_validate(args, out) -> int:
    pa = load_parameter_file(args.file)
    try:
        sys_ = from_split_form(pa)
    except LeonardSystemError as e:
        print(f"FAIL: {e}", file=out)
        if e.report is not None:
            for c in e.report.checks:
                print(f"  [{'pass' if c.passed else 'FAIL'}] {c.name} {c.detail}".rstrip(), file=out)
        return EXIT_FAIL
    rep = validate_system(sys_.A, sys_.Astar, sys_.theta, sys_.theta_star)
    for c in rep.checks:
        print(f"  [{'pass' if c.passed else 'FAIL'}] {c.name} {c.detail}".rstrip(), file=out)
    print(f"d = {pa.d}, field = {json.dumps(pa.field.to_json())}", file=out)
    _print_array(sys_.parameter_array, out)
    if pa.phi is not None:
        print("  phi matches the computed second split sequence", file=out)
    print("PASS: Leonard system" if rep.passed else "FAIL", file=out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _parse_tag(text: str) -> BasisTag:
    try:
        return BasisTag.parse(text)
    except ValueError as e:
        legal = ", ".join(t.name for t in sorted(ALL_TAGS, key=lambda t: t.name))
        raise InputError(f"{e}\nlegal tags: {legal}") from e


def cmd_transition(args, out) -> int:
    src, tgt = _parse_tag(args.source), _parse_tag(args.target)
    pa = load_parameter_file(args.file)
    sys_ = from_split_form(pa)
    f = pa.field
    gram = compute_gram(sys_)
    anchors = _anchors(sys_, _parse_seed(args.seed_anchors, f, pa.d + 1))
    ctx = TransitionContext(sys_, gram, anchors)
    fm = formula(src, tgt)
    T = ctx.evaluate(fm)
    ok = T == ctx.oracle(src, tgt)
    if args.emit in ("formula", "both"):
        print(fm.describe(), file=out)
    if args.emit in ("matrix", "both"):
        rows = T.to_strings()
        width = max((len(x) for r in rows for x in r), default=1)
        print("T =", file=out)
        for r in rows:
            print("  [" + " ".join(x.rjust(width) for x in r) + "]", file=out)
    print(f"oracle check: {'match' if ok else 'MISMATCH'}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, out) -> int:
    suites = list(SUITES)
    if args.suites:
        suites = [s.strip() for s in args.suites.split(",") if s.strip()]
        unknown = [s for s in suites if s not in SUITES]
        if unknown:
            raise InputError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
    pa = load_parameter_file(args.file)
    seed = _parse_seed(args.seed_anchors, pa.field, pa.d + 1)
    t0 = time.perf_counter()
    sys_ = from_split_form(pa)
    targets = [(g, apply(g, sys_)) for g in ELEMENTS] if args.relatives else [(ELEMENTS[0], sys_)]
    systems = []
    for g, s in targets:
        results = run_suites(s, suites, seed, args.rescale_check)
        systems.append((g, results))
    elapsed = time.perf_counter() - t0
    overall = all(r.passed for _, rs in systems for r in rs)

    print(f"leonard24 {__version__}: d = {pa.d}, field = {json.dumps(pa.field.to_json())}", file=out)
    for g, results in systems:
        print(f"system {g.symbol}", file=out)
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"  [{status}] {r.name}: {r.checks - len(r.failures)}/{r.checks} checks"
                  f" ({r.seconds:.2f} s)", file=out)
            for note in r.notes:
                print(f"      {note}", file=out)
            for name in r.failures[:20]:
                print(f"      failed: {name}", file=out)
    print(f"overall: {'PASS' if overall else 'FAIL'} ({elapsed:.2f} s)", file=out)

    if args.json:
        doc = {
            "schema": SCHEMA,
            "version": __version__,
            "instance": pa.to_json() if pa.phi is not None else sys_.parameter_array.to_json(),
            "suites": [s for s in SUITES if s in suites],
            "systems": [{"relative": g.name, "symbol": g.symbol,
                         "passed": all(r.passed for r in rs),
                         "results": [r.to_json() for r in rs]} for g, rs in systems],
            "passed": overall,
            "seconds": round(elapsed, 3),
        }
        try:
            with open(args.json, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=2)
                fh.write("\n")
        except OSError as e:
            raise InputError(f"cannot write {args.json}: {e.strerror or e}") from e
    return EXIT_OK if overall else EXIT_FAIL


def cmd_orbit(args, out) -> int:
    pa = load_parameter_file(args.file)
    sys_ = from_split_form(pa)
    base = sys_.parameter_array
    ok = True
    for g in ELEMENTS:
        row = transform_parameter_array(g, base)
        direct = parameter_array(apply(g, sys_))
        ok &= row == direct
        print(f"{g.symbol:<6} ({g.name})", file=out)
        _print_array(row, out)
    if not ok:
        print("FAIL: transformed arrays disagree with the relatives' computed arrays", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leonard24", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="construct the split-form system and check the axioms")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    t = sub.add_parser("transition", help="evaluate one transition formula")
    t.add_argument("file")
    t.add_argument("--from", dest="source", required=True, metavar="TAG")
    t.add_argument("--to", dest="target", required=True, metavar="TAG")
    t.add_argument("--emit", choices=("matrix", "formula", "both"), default="both")
    t.add_argument("--seed-anchors", metavar="V0,V1,...")
    t.set_defaults(func=cmd_transition)

    r = sub.add_parser("verify", help="run the verification suites")
    r.add_argument("file")
    r.add_argument("--suites", metavar="LIST", help=f"comma-separated subset of {','.join(SUITES)}")
    r.add_argument("--relatives", action="store_true", help="repeat on all 8 D4 relatives")
    r.add_argument("--json", metavar="PATH", help="also write a machine-readable report")
    r.add_argument("--seed-anchors", metavar="V0,V1,...")
    r.add_argument("--rescale-check", action="store_true",
                   help="rerun the transition sweep with rescaled anchors and form")
    r.set_defaults(func=cmd_verify)

    o = sub.add_parser("orbit", help="print the parameter arrays of the 8 relatives")
    o.add_argument("file")
    o.set_defaults(func=cmd_orbit)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterArrayError as e:
        print(f"FAIL: parameter array invariant violated: {e}", file=out)
        return EXIT_FAIL
    except LeonardSystemError as e:
        print(f"FAIL: {e}", file=out)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
