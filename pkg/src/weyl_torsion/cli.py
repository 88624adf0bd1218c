"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
errors (bad flags or inputs outside a result's hypotheses).
"""

from __future__ import annotations

import argparse
import io
import json
import random
import sys
from dataclasses import dataclass, field

from . import bounds as bounds_mod
from .exponents import SCOPES, saturation_exponent, tau_divisor_bound
from .invariants import (
    basic_invariants,
    ideal_slice,
    is_invariant,
    p_invariant,
    verify_halfinteger_generation,
)
from .lattice import format_matrix
from .poly import NotDivisible, PolynomialSyntaxError, format_polynomial
from .rewriting import (
    WitnessNotFound,
    expand_presentation,
    load_presentation,
    qsquared_fixture,
    rewrite_divisible,
    sample_divisible_presentations,
)
from .rootdata import HypothesisError, make_root_datum

class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    rank: int | None = None
    degrees: list[int] = field(default_factory=list)
    modulus: int = 2
    cutoff: int = 4
    scope: str = "ideal"
    fmt: str = "text"
    seed: int = 0
    output: str | None = None
    plot: str | None = None
    presentation: str | None = None
    verify_halfint: bool = False
    max_degree: int | None = None
    samples: int = 20


@dataclass
class Result:
    report: dict
    header: list[str]
    rows: list[list]
    ok: bool = True
    extra_text: str = ""


def parse_degrees(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree spec {text!r}; use d or lo..hi") from None


def _datum(cfg: RunConfig):
    if cfg.family is None or cfg.rank is None:
        raise UsageError(f"{cfg.command} needs --type and --rank")
    return make_root_datum(cfg.family, cfg.rank)


# commands ---------------------------------------------------------------------------

def cmd_invariants(cfg: RunConfig) -> Result:
    datum = _datum(cfg)
    family = basic_invariants(datum)
    gens = []
    rows = []
    for name, g, deg in zip(family.names, family.generators, family.degrees):
        check = is_invariant(datum, g)
        gens.append({"name": name, "degree": deg, "e": format_polynomial(g),
                     "omega": format_polynomial(datum.to_omega(g)), "invariant": check.invariant})
        rows.append([name, deg, check.invariant, format_polynomial(g)])
    report = {"type": datum.family, "rank": datum.rank, "weyl_order": datum.weyl_order,
              "generators": gens}
    ok = all(g["invariant"] for g in gens)
    extra = []
    slices = []
    for d in cfg.degrees:
        lat = ideal_slice(family, d, check=False)
        slices.append({"degree": d, "monomials": [list(m) for m in lat.monomials],
                       "basis": [list(r) for r in lat.basis]})
        extra.append(f"# ideal slice degree {d} (rows in omega-monomial basis)\n"
                     + format_matrix(lat.matrix(), lat.dim))
    if slices:
        report["slices"] = slices
    if cfg.verify_halfint:
        halfint = []
        for d in cfg.degrees or range(0, 7):
            h = verify_halfinteger_generation(datum, d)
            halfint.append(h.as_dict())
            ok = ok and h.passed
        report["halfinteger_generation"] = halfint
    return Result(report, ["name", "degree", "invariant", "polynomial"], rows, ok, "\n".join(extra))


def cmd_rewrite(cfg: RunConfig) -> Result:
    datum = _datum(cfg)
    family = basic_invariants(datum)
    if not cfg.degrees or len(cfg.degrees) != 1:
        raise UsageError("rewrite needs a single --degree")
    d = cfg.degrees[0]
    if cfg.presentation in (None, "qsquared"):
        if cfg.presentation is None:
            raise UsageError("rewrite needs --presentation FILE (or 'qsquared' for the built-in fixture)")
        pres = qsquared_fixture(family)
        if d != pres.degree:
            raise UsageError(f"the qsquared fixture has degree {pres.degree}")
    else:
        try:
            pres = load_presentation(family, d, cfg.presentation)
        except (OSError, json.JSONDecodeError, PolynomialSyntaxError, ValueError) as exc:
            if isinstance(exc, HypothesisError):
                raise
            raise UsageError(f"cannot load presentation: {exc}") from None
    report = {"type": datum.family, "rank": datum.rank, "degree": d, "modulus": cfg.modulus,
              "input": pres.to_json(), "expansion": format_polynomial(expand_presentation(pres))}
    try:
        out = rewrite_divisible(pres, cfg.modulus)
    except NotDivisible as exc:
        report["error"] = f"precondition failed: {exc}"
        return Result(report, ["index", "input", "rewritten"], [], ok=False)
    except WitnessNotFound as exc:
        report["error"] = f"witness not found: {exc}"
        return Result(report, ["index", "input", "rewritten"], [], ok=False)
    report["rewritten"] = out.to_json()
    report["expansion_equal"] = expand_presentation(out) == expand_presentation(pres)
    report["all_divisible"] = all(c % cfg.modulus == 0 for f in out.coeffs.values() for _, c in f.items())
    rows = []
    for i in pres.indices():
        rows.append([f"t{i}", format_polynomial(pres.coefficient(i)), format_polynomial(out.coefficient(i))])
    return Result(report, ["generator", "input", "rewritten"], rows,
                  report["expansion_equal"] and report["all_divisible"])


def cmd_exponent(cfg: RunConfig) -> Result:
    datum = _datum(cfg)
    degrees = cfg.degrees or [2]
    reports = [saturation_exponent(datum, d) for d in degrees]
    if cfg.plot:
        from .plotting import plot_exponents
        plot_exponents(reports, cfg.plot)
    rows = [[r.family + str(r.rank), r.degree, r.k_slice.rank, r.min_exponent, r.bound,
             r.witnessed, r.passed] for r in reports]
    return Result({"reports": [r.as_dict() for r in reports]},
                  ["datum", "degree", "slice_rank", "min_exponent", "bound", "direct_witness", "pass"],
                  rows, all(r.passed for r in reports))


def cmd_tau(cfg: RunConfig) -> Result:
    datum = _datum(cfg)
    degrees = cfg.degrees or [2]
    reports = [tau_divisor_bound(datum, d, cfg.cutoff, cfg.scope) for d in degrees]
    rows = [[r.family + str(r.rank), r.degree, r.cutoff, r.scope,
             "none" if r.bound is None else r.bound, r.divides_two, r.stable] for r in reports]
    return Result({"reports": [r.as_dict() for r in reports]},
                  ["datum", "degree", "cutoff", "scope", "tau_upper_bound", "divides_2", "stable"],
                  rows, all(r.divides_two and r.verified for r in reports),
                  "# " + reports[0].caveat if reports else "")


def cmd_bounds(cfg: RunConfig) -> Result:
    top = cfg.max_degree if cfg.max_degree is not None else 10
    if top < 2:
        raise UsageError("--max-degree must be at least 2")
    table = bounds_mod.bounds_table(top)
    if cfg.plot:
        from .plotting import plot_bounds
        plot_bounds(table, cfg.plot)
    rows = [[r.index, r.gamma, r.chow] for r in table]
    return Result({"rows": [r.as_dict() for r in table], "note": bounds_mod.NOTE},
                  ["index", "gamma_bound", "chow_bound"], rows, True, "# " + bounds_mod.NOTE)


STANDARD_DATA = (("B", 3), ("B", 4), ("D", 4))


def verify_all(cfg: RunConfig) -> Result:
    """Run every reproduction check at desk scale and aggregate the outcome."""
    if (cfg.family is None) != (cfg.rank is None):
        raise UsageError("give both --type and --rank, or neither")
    data = [_datum(cfg)] if cfg.family else [make_root_datum(f, n) for f, n in STANDARD_DATA]
    for datum in data:
        if datum.rank > 4:
            raise UsageError("verify-all is limited to rank ≤ 4")
    top = cfg.max_degree if cfg.max_degree is not None else 6
    rng = random.Random(cfg.seed)
    checks: list[tuple[str, bool, str]] = []

    for datum in data:
        family = basic_invariants(datum, verify=False)
        bad = [name for name, g in zip(family.names, family.generators) if not is_invariant(datum, g)]
        checks.append((f"invariance {datum.name}", not bad,
                       f"{len(family.generators)} generators x {datum.weyl_order} elements"))
        if datum.family == "B":
            check = is_invariant(datum, p_invariant(datum.rank))
            checks.append((f"negative control p{datum.rank} {datum.name}", not check.invariant,
                           f"witness {check.witness}"))
        for d in range(0, top + 1):
            h = verify_halfinteger_generation(datum, d)
            checks.append((f"halfinteger {datum.name} d={d}", h.passed,
                           f"fixed rank {h.fixed_rank}, divisors {h.fixed_over_span}"))
        sat_degrees = [2, 3, 4] if datum.family == "B" else [d for d in (2, 3, 4) if d < datum.rank]
        for d in sat_degrees:
            r = saturation_exponent(datum, d)
            checks.append((f"saturation {datum.name} d={d}", r.passed,
                           f"min exponent {r.min_exponent} <= {r.bound}"))
        if datum.family == "B" and datum.rank == 3:
            pres = qsquared_fixture(family)
            out = rewrite_divisible(pres, 2)
            ok = expand_presentation(out) == expand_presentation(pres)
            checks.append(("rewrite qsquared fixture", ok, json.dumps(out.to_json(), sort_keys=True)))
        rw_degrees = [4, 5, 6] if datum.family == "B" else [d for d in (2, 3) if d < datum.rank]
        for d in rw_degrees:
            for m in (2, 3, 4):
                failures = 0
                for pres in sample_divisible_presentations(family, d, m, cfg.samples, rng):
                    try:
                        out = rewrite_divisible(pres, m)
                        if expand_presentation(out) != expand_presentation(pres):
                            failures += 1
                    except (WitnessNotFound, AssertionError, NotDivisible):
                        failures += 1
                checks.append((f"rewrite random {datum.name} d={d} M={m}", failures == 0,
                               f"{cfg.samples} samples, {failures} failures"))
        if datum.rank <= 4:
            t = tau_divisor_bound(datum, 2, cfg.cutoff, cfg.scope)
            checks.append((f"tau {datum.name} d=2", t.divides_two and t.verified,
                           f"N={t.bound} (upper bound, cutoff {t.cutoff})"))

    expected = {(2, "gamma"): 8, (3, "gamma"): 32, (2, "chow"): 8, (3, "chow"): 512}
    got = {(i, "gamma"): bounds_mod.gamma_bound(i) for i in (2, 3)}
    got.update({(d, "chow"): bounds_mod.chow_bound(d) for d in (2, 3)})
    checks.append(("annihilator bounds", got == expected, "8, 32, 8, 512"))

    rows = [[name, "PASS" if ok else "FAIL", detail] for name, ok, detail in checks]
    report = {"seed": cfg.seed, "checks": [{"name": n, "pass": ok, "detail": det} for n, ok, det in checks],
              "all_pass": all(ok for _, ok, _ in checks)}
    return Result(report, ["check", "status", "detail"], rows, report["all_pass"])


HANDLERS = {
    "invariants": cmd_invariants,
    "rewrite": cmd_rewrite,
    "exponent": cmd_exponent,
    "tau": cmd_tau,
    "bounds": cmd_bounds,
    "verify-all": verify_all,
}


def dispatch(cfg: RunConfig) -> Result:
    return HANDLERS[cfg.command](cfg)


# rendering ------------------------------------------------------------------------------

def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.report, indent=2, ensure_ascii=False) + "\n"
    if fmt == "tsv":
        buf = io.StringIO()
        buf.write("\t".join(result.header) + "\n")
        for r in result.rows:
            buf.write("\t".join(str(x) for x in r) + "\n")
        return buf.getvalue()
    cells = [result.header] + [[str(x) for x in r] for r in result.rows]
    widths = [max(len(str(row[j])) for row in cells) for j in range(len(result.header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    text = "\n".join(lines) + "\n"
    if result.extra_text:
        text += result.extra_text.rstrip("\n") + "\n"
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weyl-torsion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "json", "tsv"), default="text")
    common.add_argument("--output", help="write the report to FILE instead of stdout")
    common.add_argument("--seed", type=int, default=0)

    datum = argparse.ArgumentParser(add_help=False)
    datum.add_argument("--type", dest="family", choices=("B", "D", "b", "d"))
    datum.add_argument("--rank", type=int)

    p = sub.add_parser("invariants", parents=[common, datum], help="basic invariants and ideal slices")
    p.add_argument("--degree", type=parse_degrees)
    p.add_argument("--verify-halfint", action="store_true")

    p = sub.add_parser("rewrite", parents=[common, datum], help="rewrite an M-divisible presentation")
    p.add_argument("--degree", type=parse_degrees, required=True)
    p.add_argument("--modulus", type=int, default=2)
    p.add_argument("--presentation", required=True,
                   help="JSON file mapping generator index to polynomial text, or 'qsquared'")

    p = sub.add_parser("exponent", parents=[common, datum], help="2-saturation exponent of the ideal slice")
    p.add_argument("--degree", type=parse_degrees, default=[2])
    p.add_argument("--plot", help="write a figure (png/svg/pdf) of exponent vs degree")

    p = sub.add_parser("tau", parents=[common, datum], help="upper bound for the d-th exponent")
    p.add_argument("--degree", type=parse_degrees, default=[2])
    p.add_argument("--cutoff", type=int, default=4)
    p.add_argument("--scope", choices=SCOPES, default="ideal")

    p = sub.add_parser("bounds", parents=[common], help="torsion annihilator table")
    p.add_argument("--max-degree", type=int, default=10)
    p.add_argument("--plot", help="write a figure (png/svg/pdf) of the bounds")

    p = sub.add_parser("verify-all", parents=[common, datum], help="run every reproduction check")
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--cutoff", type=int, default=4)
    p.add_argument("--scope", choices=SCOPES, default="ideal")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        family=ns.family.upper() if getattr(ns, "family", None) else None,
        rank=getattr(ns, "rank", None),
        degrees=getattr(ns, "degree", None) or [],
        modulus=getattr(ns, "modulus", 2),
        cutoff=getattr(ns, "cutoff", 4),
        scope=getattr(ns, "scope", "ideal"),
        fmt=ns.fmt,
        seed=ns.seed,
        output=ns.output,
        plot=getattr(ns, "plot", None),
        presentation=getattr(ns, "presentation", None),
        verify_halfint=getattr(ns, "verify_halfint", False),
        max_degree=getattr(ns, "max_degree", None),
        samples=getattr(ns, "samples", 20),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = config_from_args(ns)
    try:
        if cfg.command == "rewrite" and cfg.modulus < 2:
            raise UsageError("--modulus must be at least 2")
        result = dispatch(cfg)
    except (UsageError, HypothesisError) as exc:
        print(f"weyl-torsion {cfg.command}: usage error: {exc}", file=sys.stderr)
        return 2
    text = render(result, cfg.fmt)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if result.ok else 1


__all__ = ["RunConfig", "dispatch", "main", "verify_all"]
