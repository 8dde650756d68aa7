"""Command-line entry point: parse -> run -> report."""
from __future__ import annotations

import argparse
import datetime as dt
import logging
import sys
from fractions import Fraction

from algebra.bounds import FORMULAS
from algebra.errors import ArtinLabError, PreconditionError
from algebra.series import RingSpec
from lab.commands import HANDLERS
from lab.report import Report, error_payload, render
from utilities.config import (
    CERTIFICATE_PRIMES,
    DEFAULT_BUDGET,
    DEFAULT_CHAR,
    DEFAULT_FORMAT,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SEED,
    DEFAULT_TRUNC,
    DEFAULT_VARS,
    LOG_LEVEL,
)
from utilities.utility import (
    clear_messages,
    configure_logging,
    get_message,
    utc_stamp,
    verbosity_level,
    write_output,
)

logger = logging.getLogger(__name__)

GLOBAL_OPTIONS = ("vars", "char", "trunc", "seed", "budget", "format", "out", "verbose", "command", "handler")


def _global_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vars", default=DEFAULT_VARS, help=f"comma-separated variable names (default: {DEFAULT_VARS})")
    common.add_argument("--char", type=int, default=DEFAULT_CHAR, help="0 for QQ or a prime p for GF(p)")
    common.add_argument("--trunc", type=int, default=DEFAULT_TRUNC, help="truncation order D")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for random sampling")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum enumerated states or scanned pairs")
    common.add_argument("--format", choices=("json", "csv"), default=DEFAULT_FORMAT)
    common.add_argument("--out", default=None, help="also write the report to this file")
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def _add_scan_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ideal", required=True)
    parser.add_argument("--deg-max", dest="deg_max", type=int, default=3)
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLE_COUNT, help="random elements on top of the monomials")
    parser.add_argument("--exhaustive", action="store_true", help="every element of m of degree <= deg-max (GF(p) only)")


def _add_bound_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--formula", required=True, choices=sorted(FORMULAS))
    parser.add_argument("--a", dest="a_param", type=Fraction)
    parser.add_argument("--b", dest="b_param", type=Fraction)
    parser.add_argument("--c", type=Fraction)
    parser.add_argument("--iI", type=int)
    parser.add_argument("--iP", type=int)
    parser.add_argument("--iJn", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--t", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--ord-g", dest="ord_g", type=int)
    parser.add_argument("--max-ord", dest="max_ord", type=int)
    parser.add_argument("--nu", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog="artin-lab",
        description="Artin functions, Artin-Rees indices and ICL constants in truncated power series rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=HANDLERS[name])
        return p

    p = command("ord", "order of a series")
    p.add_argument("--x", required=True)

    p = command("nu", "nu_I(x) = max{n : x in I + m^n}")
    p.add_argument("--ideal", required=True)
    p.add_argument("--x", required=True)

    p = command("nubar", "Rees estimate max nu_I(x^n)/n")
    p.add_argument("--ideal", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--n-max", dest="n_max", type=int, default=4)

    p = command("ar-index", "Artin-Rees index of an ideal or module")
    p.add_argument("--ideal")
    p.add_argument("--module", help="generators written '(a,b);(c,d)'")
    p.add_argument("--up-to", dest="up_to", type=int)

    p = command("icl-scan", "smallest b with nu(gh) <= a(nu(g)+nu(h)) + b over scanned pairs")
    _add_scan_options(p)
    p.add_argument("--a", type=Fraction, default=Fraction(1))
    p.add_argument("--envelope", action="store_true", help="scan a in {1, 3/2, 2}")

    p = command("valcheck", "whether nu_I is a valuation on the scanned pairs")
    _add_scan_options(p)

    p = command("solve-linreg", "exact solution of sum f_j X_j = 0 with regular initial forms")
    p.add_argument("--f", required=True, help="comma-separated generators, by increasing order")
    p.add_argument("--x", required=True, help="comma-separated approximate solution")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--assume-regular", dest="assume_regular", action="store_true")

    p = command("solve-fxhy", "exact solution of fX + hY = 0 for f = T1^k + g")
    p.add_argument("--k", type=int, required=True)
    for name in ("f", "h", "x", "y"):
        p.add_argument(f"--{name}", required=True)
    p.add_argument("--i", type=int, required=True)

    p = command("solve-lin", "exact solution of sum f_j X_j = 0 near x from the Artin-Rees index")
    p.add_argument("--ideal")
    p.add_argument("--module")
    p.add_argument("--x", required=True)
    p.add_argument("--i", type=int, required=True)

    p = command("stable-ar", "stable Artin-Rees inclusion for ((x)+I)")
    p.add_argument("--ideal", default=None)
    p.add_argument("--xs", required=True, help="comma-separated elements x")
    p.add_argument("--a", type=Fraction, default=Fraction(1))
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--search", action="store_true", help="minimal b for each a in {1, 3/2, 2}")
    p.add_argument("--b-max", dest="b_max", type=int)

    p = command("beta-lb", "brute-force lower bound for the Artin function over GF(p)")
    p.add_argument("--system", required=True, help="equations in X1..Xn separated by ';'")
    p.add_argument("--i", type=int)
    p.add_argument("--i-max", dest="i_max", type=int)

    p = command("witness", "witness family for X1X2 - X3X4")
    p.add_argument("--i", type=int)
    p.add_argument("--i-max", dest="i_max", type=int)
    p.add_argument("--certify", action="store_true", help="run the irreducibility certificates as well")
    p.add_argument("--primes", default=",".join(str(q) for q in CERTIFICATE_PRIMES))

    p = command("split-witness", "x, y, z with xy - fz in m^(n+4) for f = T1^2 - T2^2(1+T2)")
    p.add_argument("--n", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)

    p = command("power-family", "hypotheses and constants of the prop73 bound")
    p.add_argument("--f", required=True)
    p.add_argument("--others", help="comma-separated f_l; empty for none")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--c", type=Fraction, default=Fraction(0), help="Rees constant of (f, f_l)")
    p.add_argument("--i-max", dest="i_max", type=int)

    p = command("irr-check", "exhaustive irreducibility of T1T2 - T3^i modulo m^(i+1)")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--p", type=int)

    p = command("bound", "evaluate a closed-form bound")
    _add_bound_params(p)
    p.add_argument("--i", type=int)
    p.add_argument("--i-max", dest="i_max", type=int)

    p = command("cross-check", "compare measured values with a closed-form bound")
    _add_bound_params(p)
    p.add_argument("--measured", help="points written 'i:value,i:value'")
    p.add_argument("--witness", type=int, metavar="I_MAX", help="use the lower bounds i^2 - 1 up to I_MAX")
    p.add_argument("--system", help="use beta_D(i) of this system")
    p.add_argument("--i-max", dest="i_max", type=int)
    p.add_argument("--kind", choices=("upper", "lower"), default="upper")
    return parser


def _ring(args) -> RingSpec:
    names = [name.strip() for name in args.vars.split(",") if name.strip()]
    if not names:
        raise PreconditionError("--vars must name at least one variable")
    return RingSpec.from_names(names, args.char, args.trunc)


def run_command(argv: list[str]) -> tuple[Report, argparse.Namespace]:
    """Parse argv and execute the subcommand; the report carries the collected warnings."""
    args = build_parser().parse_args(argv)
    clear_messages()
    ring = _ring(args)
    report = args.handler(args, ring)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in GLOBAL_OPTIONS and v is not None}
    report.params = {**params, **report.params}
    if report.seed is None and args.command in ("icl-scan", "valcheck"):
        report.seed = args.seed
    report.warnings = get_message("warn") + report.warnings
    report.notes = get_message("info") + report.notes
    return report, args


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre_parser = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre_parser.add_argument("-v", "--verbose", action="count", default=0)
    known, _ = pre_parser.parse_known_args(argv)
    configure_logging(verbosity_level(known.verbose, LOG_LEVEL))
    command = next((a for a in argv if a in HANDLERS), "artin-lab")

    logger.info("Starting artin-lab %s..........................", command)
    start = dt.datetime.now(dt.timezone.utc)
    try:
        report, args = run_command(argv)
        text = render(report, args.format)
        exit_code = 0
    except ArtinLabError as exc:
        logger.error("%s failed: %s", command, exc)
        text = error_payload(command, exc, exc.exit_code)
        exit_code = exc.exit_code
        args = None
    except Exception as exc:
        logger.exception("unexpected error in %s", command)
        text = error_payload(command, exc, 1)
        exit_code = 1
        args = None

    sys.stdout.write(text)
    if args is not None and args.out:
        target = write_output(args.out, text)
        logger.info("report written to %s", target)
    logger.info("artin-lab %s complete..........................", command)

    end = dt.datetime.now(dt.timezone.utc)
    duration = (end - start).total_seconds()
    logger.info("[pipeline] Finished %s at %s (duration: %.1fs)", command, utc_stamp(end), duration)
    return exit_code
