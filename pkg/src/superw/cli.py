"""Command-line front end.

    superw generate --family gl --variant n+1 --n 1 --format json
    superw verify --family osp --variant 2n+1|2n --n 1
    superw check-axioms --family gl --variant n-1 --n 2
    superw identities --family osp --variant 2n|2n --n 1

Exit codes: 0 pass, 2 usage, 3 verification failure, 4 floor exhausted.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .chibra import AffinePVA
from .dops import FloorExhausted, TailMismatch
from .liesuper import AlgebraSpec, Family
from .superpoly import DiffPoly
from .wgen import (
    Generator,
    GeneratorSet,
    Report,
    axiom_report,
    generators,
    identities,
    verify,
    verify_weights,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAIL = 3
EXIT_FLOOR = 4

COMMANDS = ("generate", "verify", "check-axioms", "weights", "identities")
VARIANTS = {
    "gl": ("n+1", "n-1"),
    "sl": ("n+1", "n-1"),
    "osp": ("2n+1|2n", "2n-1|2n", "2n|2n", "2n+2|2n"),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    family: Family
    n: int
    command: str
    fmt: str = "text"
    floor: Optional[int] = None
    k: Fraction = Fraction(1)
    verbosity: int = 0
    all_generators: bool = False
    check: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.fmt not in ("text", "json"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.n < 1:
            raise UsageError("--n must be at least 1")
        if self.floor is not None and self.floor > 0:
            raise UsageError("--floor must be <= 0")
        if self.k == 0:
            raise UsageError("--k must be nonzero")

    @property
    def spec(self) -> AlgebraSpec:
        try:
            return AlgebraSpec(self.family, self.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


# -- serialization ---------------------------------------------------------------


def _rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def poly_to_terms(p: DiffPoly) -> List[dict]:
    out = []
    for mono in sorted(p.terms):
        out.append({
            "coeff": _rational(p.terms[mono]),
            "monomial": [{"basis": s.label, "deriv": s.m} for s in mono],
        })
    return out


def terms_to_poly(terms: Sequence[dict], pva: AffinePVA) -> DiffPoly:
    out = DiffPoly()
    for t in terms:
        raw = [pva.sym(f["basis"], int(f["deriv"])) for f in t["monomial"]]
        out = out + DiffPoly.from_raw(raw, Fraction(t["coeff"]))
    return out


def generator_to_dict(g: Generator) -> dict:
    return {"label": g.label, "delta": _rational(g.delta), "terms": poly_to_terms(g.poly)}


def generator_from_dict(d: dict, pva: AffinePVA) -> Generator:
    t = Fraction(d["delta"]) * 2
    if t.denominator != 1:
        raise ValueError(f"delta {d['delta']} is not a half-integer")
    return Generator(d["label"], terms_to_poly(d["terms"], pva), int(t))


def document(cfg: RunConfig, items: Sequence[Generator], verification: Optional[dict]) -> dict:
    return {
        "family": cfg.spec.name,
        "n": cfg.n,
        "k": _rational(cfg.k),
        "generators": [generator_to_dict(g) for g in items],
        "verification": verification if verification is not None else {"skipped": True},
    }


def parse_document(text: str, pva: AffinePVA) -> List[Generator]:
    doc = json.loads(text)
    return [generator_from_dict(d, pva) for d in doc["generators"]]


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


# -- commands ----------------------------------------------------------------------


def _report_lines(rep: Report, verbosity: int) -> List[str]:
    lines = [f"{rep.title}: {'PASS' if rep.ok else 'FAIL'} ({sum(c.passed for c in rep.checks)}/{len(rep.checks)})"]
    for c in rep.checks:
        if verbosity or not c.passed:
            tail = f"  [{c.detail}]" if c.detail else ""
            lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.name}{tail}")
    for note in rep.notes:
        lines.append(f"  note: {note}")
    if not rep.ok:
        lines.append(f"first failure: {rep.first_failure().name}")
    return lines


def _emit_report(cfg: RunConfig, rep: Report, out) -> int:
    if cfg.fmt == "json":
        doc = {"family": cfg.spec.name, "n": cfg.n, "k": _rational(cfg.k), "command": cfg.command}
        doc["verification"] = rep.as_dict()
        out.write(dumps(doc) + "\n")
    else:
        out.write("\n".join(_report_lines(rep, cfg.verbosity)) + "\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


def _selected(cfg: RunConfig, gens: GeneratorSet) -> List[Generator]:
    return list(gens.items) if cfg.all_generators else gens.minimal_items()


def cmd_generate(cfg: RunConfig, out=sys.stdout) -> int:
    gens = generators(cfg.spec, cfg.k, cfg.floor)
    rep = verify(cfg.spec, cfg.k, cfg.floor, gens) if cfg.check else None
    items = _selected(cfg, gens)
    if cfg.fmt == "json":
        out.write(dumps(document(cfg, items, rep.as_dict() if rep else None)) + "\n")
    else:
        out.write(f"{cfg.spec.name}, k = {_rational(cfg.k)}: {len(items)} generators\n")
        for g in items:
            out.write(f"  {g.label}  delta={_rational(g.delta)}  terms={len(g.poly.terms)}\n")
            if cfg.verbosity:
                out.write(f"    {g.poly.render()}\n")
        if rep is not None:
            out.write("\n".join(_report_lines(rep, cfg.verbosity)) + "\n")
    return EXIT_OK if rep is None or rep.ok else EXIT_FAIL


def cmd_verify(cfg: RunConfig, out=sys.stdout) -> int:
    return _emit_report(cfg, verify(cfg.spec, cfg.k, cfg.floor), out)


def cmd_check_axioms(cfg: RunConfig, out=sys.stdout) -> int:
    return _emit_report(cfg, axiom_report(cfg.spec, cfg.k), out)


def cmd_weights(cfg: RunConfig, out=sys.stdout) -> int:
    gens = generators(cfg.spec, cfg.k, cfg.floor)
    rep = verify_weights(gens)
    if cfg.fmt == "text":
        for g in _selected(cfg, gens):
            out.write(f"{g.label}: delta = {_rational(g.delta)}\n")
    return _emit_report(cfg, rep, out)


def cmd_identities(cfg: RunConfig, out=sys.stdout) -> int:
    rep = identities(cfg.spec, cfg.floor)
    if cfg.k != 1:
        rep.notes.append("identities are checked at k = 1")
    return _emit_report(cfg, rep, out)


HANDLERS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "check-axioms": cmd_check_axioms,
    "weights": cmd_weights,
    "identities": cmd_identities,
}


# -- argument parsing ----------------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superw", description="Generators of principal SUSY W-algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--family", required=True, choices=sorted(VARIANTS))
        p.add_argument("--variant", required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
        p.add_argument("--floor", type=int, default=None, help="lowest D-degree kept (default from SUPERW_FLOOR or -(|I|+4))")
        p.add_argument("--k", type=_fraction, default=Fraction(1), help="coupling, default 1")
        p.add_argument("-v", "--verbose", action="count", default=0)
        p.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
        if name in ("generate", "weights"):
            p.add_argument("--all", dest="all_generators", action="store_true", help="emit every w_t, not only the minimal set")
        if name == "generate":
            p.add_argument("--no-verify", dest="check", action="store_false")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.variant not in VARIANTS[args.family]:
        raise UsageError(f"variant for {args.family} must be one of {', '.join(VARIANTS[args.family])}")
    return RunConfig(
        family=Family.lookup(args.family, args.variant),
        n=args.n,
        command=args.command,
        fmt=args.fmt,
        floor=args.floor,
        k=args.k,
        verbosity=args.verbose,
        all_generators=getattr(args, "all_generators", False),
        check=getattr(args, "check", True),
    )


def run(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    try:
        cfg.spec  # validates n against the family
        return HANDLERS[cfg.command](cfg, out)
    except UsageError as exc:
        err.write(f"superw: error: {exc}\n")
        return EXIT_USAGE
    except FloorExhausted as exc:
        err.write(f"superw: floor exhausted: {exc}\n")
        return EXIT_FLOOR
    except TailMismatch as exc:
        err.write(f"superw: verification failed: {exc}\n")
        return EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
    except UsageError as exc:
        err.write(f"superw: error: {exc}\n")
        return EXIT_USAGE
    if args.output is None:
        return run(cfg, out, err)
    buf = io.StringIO()
    code = run(cfg, buf, err)
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        err.write(f"superw: error: cannot write {args.output}: {exc}\n")
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
