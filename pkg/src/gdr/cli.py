"""Command-line verifier: run both pipelines over families of test
classes, compare exactly, and emit JSON or CSV reports.

Subcommands:
    verify  --genus G [--kappa] [--boundary] [--cache PATH]
            [--out PATH --format json|csv]
    bside   --genus G --omega SPEC     one bamboo-side pairing
    drside  --genus G --omega SPEC     one divisor-side pairing
    witten  --genus G --exps K1,K2,... one psi correlator
    hodge   --genus G --exps K1,K2,... one capped psi integral
    bamboos --genus G                  list the signed bamboo terms

The omega grammar is whitespace-separated ``psi1^a psi2^b kappa1^c ...``
(exponent 1 omissible, ``1`` for the unit). Correlator caching uses
--cache, else $GDR_CACHE, else ``.gdr_cache`` in the working directory.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .bamboo import enumerate_bamboos, pair_bamboo_boundary, pair_bamboo_side
from .core import ChainVertex, DecoratedChain, PsiKappaMonomial, format_rational, kappa_map
from .correlators import CacheError, correlator, load_cache_into_memo, store_cache
from .hain import pair_dr_boundary, pair_dr_side
from .hodge import psi_lambda_g_integral

DEFAULT_CACHE_FILENAME = ".gdr_cache"


@dataclass(frozen=True)
class TestClass:
    """One omega to pair against both pipelines: either a monomial or a
    decorated two-vertex boundary class."""

    label: str
    monomial: Optional[PsiKappaMonomial] = None
    boundary: Optional[DecoratedChain] = None

    def bamboo_value(self, g: int) -> Fraction:
        if self.monomial is not None:
            return pair_bamboo_side(g, self.monomial)
        return pair_bamboo_boundary(self.boundary)

    def dr_value(self, g: int) -> Fraction:
        if self.monomial is not None:
            return pair_dr_side(g, self.monomial)
        return pair_dr_boundary(self.boundary)


@dataclass(frozen=True)
class VerificationRecord:
    omega: str
    bamboo: Fraction
    dr: Fraction
    equal: bool
    ms: int


@dataclass
class VerificationReport:
    genus: int
    records: List[VerificationRecord] = field(default_factory=list)
    aborted: List[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def equal_count(self) -> int:
        return sum(1 for r in self.records if r.equal)

    @property
    def passed(self) -> bool:
        return not self.aborted and all(r.equal for r in self.records)


def _monomials_of_degree(degree: int, include_kappa: bool) -> List[PsiKappaMonomial]:
    """Monomials psi1^a psi2^b * kappa-part of the given total degree,
    pure-psi first with a descending, then by ascending kappa degree."""
    out: List[PsiKappaMonomial] = []
    kappa_degrees = range(degree + 1) if include_kappa else (0,)
    for kdeg in kappa_degrees:
        psi_deg = degree - kdeg
        for partition in _partitions(kdeg):
            counts: dict = {}
            for part in partition:
                counts[part] = counts.get(part, 0) + 1
            for d1 in range(psi_deg, -1, -1):
                out.append(PsiKappaMonomial(d1, psi_deg - d1, kappa_map(counts)))
    return out


def _partitions(total: int, minimum: int = 1) -> List[tuple]:
    """Partitions of `total` as ascending tuples, lexicographically ordered."""
    if total == 0:
        return [()]
    out = []
    for part in range(minimum, total + 1):
        for rest in _partitions(total - part, part):
            out.append((part,) + rest)
    return out


def _boundary_label(omega: DecoratedChain) -> str:
    left, right = omega.vertices
    h = left.genus
    left_str = str(PsiKappaMonomial(left.left_psi, left.right_psi, left.kappa))
    right_str = str(PsiKappaMonomial(right.left_psi, right.right_psi, right.kappa))
    return f"delta({h})[{left_str} | {right_str}]"


def enumerate_omegas(g: int, include_kappa: bool = False, include_boundary: bool = False) -> List[TestClass]:
    """All test classes of complementary degree g-1: the psi/kappa
    monomials, plus (optionally) decorated two-vertex boundary classes.

    Boundary decorations are split in every way over the four legs and,
    when kappa is enabled, the two vertices; the labels read
    ``delta(h)[left deco | right deco]`` with the left deco's psi2 slot
    meaning the node branch (mirrored for the right deco's psi1 slot).
    """
    if g < 1:
        raise ValueError("genus must be >= 1")
    out = [
        TestClass(label=str(m), monomial=m)
        for m in _monomials_of_degree(g - 1, include_kappa)
    ]
    if include_boundary:
        deco_total = g - 2
        for h in range(1, g):
            if deco_total < 0:
                continue
            for left_deg in range(deco_total + 1):
                for left in _monomials_of_degree(left_deg, include_kappa):
                    for right in _monomials_of_degree(deco_total - left_deg, include_kappa):
                        chain = DecoratedChain(
                            (
                                ChainVertex(h, left.d1, left.d2, left.kappa),
                                ChainVertex(g - h, right.d1, right.d2, right.kappa),
                            )
                        )
                        out.append(TestClass(label=_boundary_label(chain), boundary=chain))
    return out


def verify(g: int, include_kappa: bool = False, include_boundary: bool = False) -> VerificationReport:
    """Run both pipelines over every enumerated omega and compare exactly.

    An internal degree-bookkeeping violation aborts that record with a
    diagnostic on stderr instead of reporting a value, and fails the run.
    """
    report = VerificationReport(genus=g)
    for test_class in enumerate_omegas(g, include_kappa, include_boundary):
        start = time.perf_counter()
        try:
            bamboo_value = test_class.bamboo_value(g)
            dr_value = test_class.dr_value(g)
        except ValueError as exc:
            print(f"aborted record {test_class.label!r}: {exc}", file=sys.stderr)
            report.aborted.append(test_class.label)
            continue
        ms = int((time.perf_counter() - start) * 1000)
        report.records.append(
            VerificationRecord(
                omega=test_class.label,
                bamboo=bamboo_value,
                dr=dr_value,
                equal=bamboo_value == dr_value,
                ms=ms,
            )
        )
    return report


def report_to_json(report: VerificationReport) -> str:
    payload = {
        "genus": report.genus,
        "records": [
            {
                "omega": r.omega,
                "bamboo": format_rational(r.bamboo),
                "dr": format_rational(r.dr),
                "equal": r.equal,
                "ms": r.ms,
            }
            for r in report.records
        ],
        "pass": report.passed,
    }
    return json.dumps(payload, indent=2)


def report_to_csv(report: VerificationReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["genus", "omega", "bamboo", "dr", "equal", "ms"])
    for r in report.records:
        writer.writerow(
            [
                report.genus,
                r.omega,
                format_rational(r.bamboo),
                format_rational(r.dr),
                "true" if r.equal else "false",
                r.ms,
            ]
        )
    return buffer.getvalue()


def resolve_cache_path(cli_value: Optional[str]) -> str:
    if cli_value:
        return cli_value
    env_value = os.environ.get("GDR_CACHE")
    if env_value:
        return env_value
    return DEFAULT_CACHE_FILENAME


def _load_cache_tolerant(path: str) -> None:
    if not os.path.exists(path):
        return
    try:
        load_cache_into_memo(path)
    except CacheError as exc:
        print(f"warning: cache {path} rejected ({exc}); recomputing", file=sys.stderr)


def _store_cache_tolerant(path: str) -> None:
    try:
        store_cache(path)
    except OSError as exc:
        print(f"warning: could not write cache {path}: {exc}", file=sys.stderr)


def _parse_exps(text: str) -> tuple:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise SystemExit(f"error: bad exponent list {text!r}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="compare both pipelines over a family of test classes")
    p_verify.add_argument("--genus", type=int, required=True)
    p_verify.add_argument("--kappa", action="store_true", help="include kappa-bearing monomials")
    p_verify.add_argument("--boundary", action="store_true", help="include two-vertex boundary classes")
    p_verify.add_argument("--cache", default=None, help="correlator cache file")
    p_verify.add_argument("--out", default=None, help="write the report here instead of stdout")
    p_verify.add_argument("--format", choices=("json", "csv"), default="json")

    for name, help_text in (
        ("bside", "pair the bamboo class against one monomial"),
        ("drside", "pair the capped divisor power against one monomial"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--genus", type=int, required=True)
        p.add_argument("--omega", required=True)
        p.add_argument("--cache", default=None)

    p_witten = sub.add_parser("witten", help="one psi correlator")
    p_witten.add_argument("--genus", type=int, required=True)
    p_witten.add_argument("--exps", required=True)
    p_witten.add_argument("--cache", default=None)

    p_hodge = sub.add_parser("hodge", help="one capped psi integral")
    p_hodge.add_argument("--genus", type=int, required=True)
    p_hodge.add_argument("--exps", required=True)

    p_bamboos = sub.add_parser("bamboos", help="list the signed bamboo terms")
    p_bamboos.add_argument("--genus", type=int, required=True)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "bamboos":
        try:
            bamboos = enumerate_bamboos(args.genus)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        for bamboo in bamboos:
            print(bamboo)
        return 0

    if args.command == "hodge":
        try:
            value = psi_lambda_g_integral(args.genus, _parse_exps(args.exps))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(format_rational(value))
        return 0

    cache_path = resolve_cache_path(args.cache)

    if args.command == "witten":
        _load_cache_tolerant(cache_path)
        try:
            value = correlator(args.genus, _parse_exps(args.exps))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        _store_cache_tolerant(cache_path)
        print(format_rational(value))
        return 0

    if args.command in ("bside", "drside"):
        try:
            omega = PsiKappaMonomial.parse(args.omega)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        try:
            if args.command == "bside":
                _load_cache_tolerant(cache_path)
                value = pair_bamboo_side(args.genus, omega)
                _store_cache_tolerant(cache_path)
            else:
                value = pair_dr_side(args.genus, omega)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(format_rational(value))
        return 0

    # verify
    _load_cache_tolerant(cache_path)
    try:
        report = verify(args.genus, include_kappa=args.kappa, include_boundary=args.boundary)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _store_cache_tolerant(cache_path)

    rendered = report_to_json(report) if args.format == "json" else report_to_csv(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(rendered)
            if not rendered.endswith("\n"):
                handle.write("\n")
    else:
        print(rendered)
    print(
        f"{'PASS' if report.passed else 'FAIL'}: {report.equal_count}/{report.total} "
        f"test classes equal at genus {report.genus}",
        file=sys.stderr,
    )
    return 0 if report.passed else 1
