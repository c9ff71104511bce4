"""Command-line front end: batch checks with text or structured reports.

Exit status: 0 when every requested check passes, 1 when a check fails
(reports carry the residuals), 2 on syntax errors in the inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .exterior import form_str
from .families import (
    ContractionError,
    DegenerateParameterError,
    FAMILIES,
    TheoremWitnessError,
    contraction_limit,
    instantiate,
    verify_theorem,
)
from .g2 import G2Error, build_product, dT_tests, torsion
from .liealg import (
    GenericEvaluationError,
    JacobiError,
    NilpotencyError,
    SalamonSyntaxError,
    betti,
    fingerprint,
    parse_salamon,
    salamon_str,
)
from .scalars import ParameterContext, ScalarSyntaxError, _fold_unicode
from .su3 import (
    StructureError,
    is_half_integrable,
    load_structure_file,
    torsion_classes,
)

SCHEMA_VERSION = 1

_DEFAULT_PARAMS = ("a1", "k", "lam", "t", "z")


@dataclass
class CheckResult:
    name: str
    passed: Optional[bool]
    detail: str = ""
    data: Dict[str, str] = field(default_factory=dict)


@dataclass
class Report:
    command: str
    input_description: str
    checks: List[CheckResult] = field(default_factory=list)
    timing_ms: float = 0.0
    seed: Optional[int] = None

    def add(self, name: str, passed: Optional[bool], detail: str = "", **data) -> None:
        self.checks.append(
            CheckResult(name=name, passed=passed, detail=detail,
                        data={k: str(v) for k, v in data.items()})
        )

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tool": f"nilg2 {__version__}",
            "command": self.command,
            "input": self.input_description,
            "passed": self.passed,
            "seed": self.seed,
            "timing_ms": round(self.timing_ms, 3),
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                    "data": c.data,
                }
                for c in self.checks
            ],
        }
        return json.dumps(doc, indent=2)

    def to_text(self) -> str:
        lines = [
            f"nilg2 {__version__} | {self.command} | {self.input_description}",
        ]
        for c in self.checks:
            if c.passed is None:
                mark = "info"
            else:
                mark = "pass" if c.passed else "FAIL"
            line = f"  [{mark}] {c.name}"
            if c.detail:
                line += f": {c.detail}"
            lines.append(line)
            for key, value in c.data.items():
                lines.append(f"         {key} = {value}")
        lines.append(
            f"  => {'all checks passed' if self.passed else 'CHECKS FAILED'}"
            f" ({self.timing_ms:.1f} ms)"
        )
        return "\n".join(lines)


def _parse_param_args(pairs: Sequence[str]) -> Tuple[ParameterContext, Dict[str, Fraction]]:
    names = set(_DEFAULT_PARAMS)
    bindings: Dict[str, Fraction] = {}
    raw: List[Tuple[str, str]] = []
    for pair in pairs or ():
        if "=" not in pair:
            raise ScalarSyntaxError(f"--param expects name=value, got {pair!r}", 0)
        name, value = pair.split("=", 1)
        name = _fold_unicode(name.strip())
        names.add(name)
        raw.append((name, value.strip()))
    ctx = ParameterContext(tuple(sorted(names)))
    for name, value in raw:
        bindings[name] = ctx.parse(value).as_fraction()
    return ctx, bindings


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nilg2",
        description="exact torsion geometry checks on nilpotent Lie algebras",
    )
    parser.add_argument("--param", action="append", default=[],
                        metavar="NAME=VALUE", help="bind a parameter (repeatable)")
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized evaluation points")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Jacobi and nilpotency of an algebra")
    p.add_argument("algebra")
    p = sub.add_parser("betti", help="Betti numbers of an algebra")
    p.add_argument("algebra")
    p = sub.add_parser("fingerprint", help="isomorphism fingerprint of an algebra")
    p.add_argument("algebra")
    p = sub.add_parser("su3", help="torsion components of a structure file or family")
    p.add_argument("structure_file")
    p = sub.add_parser("g2t", help="product torsion report of a structure file or family")
    p.add_argument("structure_file")
    sub.add_parser("theorem", help="replay the classification witnesses")
    p = sub.add_parser("contract", help="contraction limit of an algebra")
    p.add_argument("algebra")
    p.add_argument("--exponents", required=True,
                   help="comma-separated integer exponent per coframe axis")
    p.add_argument("--direction", choices=("to-zero", "to-infinity"), required=True)

    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        ctx, bindings = _parse_param_args(args.param)
        report = _dispatch(args, ctx, bindings)
    except (ScalarSyntaxError, SalamonSyntaxError) as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    report.timing_ms = (time.perf_counter() - started) * 1000.0
    report.seed = args.seed
    print(report.to_json() if args.format == "structured" else report.to_text())
    return 0 if report.passed else 1


def _dispatch(args, ctx: ParameterContext, bindings: Dict[str, Fraction]) -> Report:
    command = args.command
    if command == "check":
        return _cmd_check(args.algebra, ctx)
    if command == "betti":
        return _cmd_betti(args.algebra, ctx, bindings, args.seed)
    if command == "fingerprint":
        return _cmd_fingerprint(args.algebra, ctx, bindings, args.seed)
    if command == "su3":
        return _cmd_su3(args.structure_file, ctx, bindings)
    if command == "g2t":
        return _cmd_g2t(args.structure_file, ctx, bindings)
    if command == "theorem":
        return _cmd_theorem()
    if command == "contract":
        return _cmd_contract(args.algebra, args.exponents, args.direction, ctx)
    raise AssertionError(command)


def _cmd_check(text: str, ctx: ParameterContext) -> Report:
    report = Report(command="check", input_description=text)
    try:
        g = parse_salamon(text, ctx)
    except JacobiError as exc:
        report.add("jacobi", False, "d^2 != 0",
                   index=exc.index, certificate=form_str(exc.certificate))
        return report
    except NilpotencyError as exc:
        report.add("jacobi", True)
        report.add("nilpotency", False, str(exc))
        return report
    report.add("jacobi", True, "d^2 = 0 identically")
    report.add("nilpotency", True, "admissible filtration found",
               algebra=salamon_str(g))
    return report


def _cmd_betti(text: str, ctx: ParameterContext,
               bindings: Dict[str, Fraction], seed: int) -> Report:
    report = Report(command="betti", input_description=text)
    g = parse_salamon(text, ctx)
    try:
        values = {k: betti(g, k, bindings or None, seed) for k in range(1, g.ctx.dim + 1)}
    except GenericEvaluationError as exc:
        report.add("betti", False, str(exc))
        return report
    report.add("betti", True, " ".join(f"b{k}={v}" for k, v in values.items()),
               **{f"b{k}": v for k, v in values.items()})
    return report


def _cmd_fingerprint(text: str, ctx: ParameterContext,
                     bindings: Dict[str, Fraction], seed: int) -> Report:
    report = Report(command="fingerprint", input_description=text)
    g = parse_salamon(text, ctx)
    try:
        fp = fingerprint(g, bindings or None, seed)
    except GenericEvaluationError as exc:
        report.add("fingerprint", False, str(exc))
        return report
    report.add(
        "fingerprint", True,
        detail=f"betti {fp.betti}",
        betti=fp.betti,
        lower_central=fp.lower_central,
        derived=fp.derived,
        upper_central=fp.upper_central,
        exact_two_forms_decomposable=fp.exact_two_forms_decomposable,
        wedge_data=fp.wedge_data,
    )
    return report


def _load_input_structure(path: str, ctx: ParameterContext, bindings):
    """A structure file path, or a family name with --param bindings."""
    if path in FAMILIES:
        _, structure = instantiate(path, bindings or None, params=ctx)
        return structure
    structure, _ = load_structure_file(path, ctx)
    return structure


def _cmd_su3(path: str, ctx: ParameterContext, bindings) -> Report:
    report = Report(command="su3", input_description=path)
    try:
        structure = _load_input_structure(path, ctx, bindings)
    except (StructureError, DegenerateParameterError) as exc:
        report.add("structure", False, str(exc))
        return report
    report.add("structure", True, "compatible SU(3)-structure",
               algebra=salamon_str(structure.algebra))
    classes = torsion_classes(structure)
    report.add(
        "torsion-classes", True,
        detail=f"half-integrable: {is_half_integrable(structure)}",
        W1_plus=classes.W1p, W1_minus=classes.W1m,
        W2_plus=form_str(classes.W2p), W2_minus=form_str(classes.W2m),
        W3=form_str(classes.Omega),
        W4=form_str(classes.W4), W5=form_str(classes.W5),
        beta=form_str(classes.beta), vartheta=form_str(classes.vartheta),
        lam=classes.lam,
    )
    return report


def _cmd_g2t(path: str, ctx: ParameterContext, bindings) -> Report:
    report = Report(command="g2t", input_description=path)
    try:
        structure = _load_input_structure(path, ctx, bindings)
        product = build_product(structure)
        result = dT_tests(product, torsion(product))
    except (StructureError, G2Error, DegenerateParameterError) as exc:
        residual = getattr(exc, "residual", None)
        report.add("g2t", False, str(exc),
                   **({"residual": form_str(residual)} if residual is not None else {}))
        return report
    report.add("lee-form", True, theta=form_str(result.theta),
               lam=result.lam, beta=form_str(result.beta))
    report.add("torsion", True, "both torsion routes agree",
               T=form_str(result.T), star_T=form_str(result.star_T),
               inner_dphi_starphi=result.inner_dphi_starphi)
    report.add("derivatives", True,
               dT=form_str(result.dT), d_star_T=form_str(result.d_star_T))
    report.add("tests", True,
               detail=(
                   f"strong={result.is_strong} type22={result.dT_type_22} "
                   f"V7Free={result.dT_in_R_plus_S2}"
               ),
               is_strong=result.is_strong,
               dT_type_22=result.dT_type_22,
               dT_in_R_plus_S2=result.dT_in_R_plus_S2)
    return report


def _cmd_theorem() -> Report:
    report = Report(command="theorem", input_description="classification replay")
    try:
        table = verify_theorem()
        rows = table.rows
    except TheoremWitnessError as exc:
        rows = exc.table.rows
    for row in rows:
        report.add(
            f"entry {row.entry}", row.passed,
            detail=row.note,
            family=row.family,
            binding="" if row.binding is None else
            " ".join(f"{k}={v}" for k, v in sorted(row.binding.items())),
            witness="none" if row.witness is None else repr(row.witness),
            fingerprint_match=row.fingerprint_ok,
        )
    return report


def _cmd_contract(text: str, exponents: str, direction: str,
                  ctx: ParameterContext) -> Report:
    report = Report(command="contract", input_description=text)
    g = parse_salamon(text, ctx)
    try:
        exps = [int(x) for x in exponents.split(",")]
    except ValueError:
        raise ScalarSyntaxError(f"bad exponent list {exponents!r}", 0) from None
    try:
        limit = contraction_limit(g, exps, direction)
    except ContractionError as exc:
        report.add("contract", False, str(exc))
        return report
    report.add("contract", True, f"direction {direction}",
               limit=salamon_str(limit))
    return report


if __name__ == "__main__":
    sys.exit(main())
