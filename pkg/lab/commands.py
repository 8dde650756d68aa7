"""One handler per subcommand: parse the inputs, run the algebra, build a Report."""
from __future__ import annotations

import logging
from fractions import Fraction

from algebra.artin import (
    artin_rees_index,
    beta_lower_bound_bruteforce,
    power_family_check,
    solve_fx_hy,
    solve_linear_artin_rees,
    solve_linear_regular,
    stable_ar_scan,
    stable_ar_search,
)
from algebra.bounds import BoundFunction, BoundParams, cross_check_bound
from algebra.errors import MissingParameterError, ParseError, PreconditionError
from algebra.orders import Sampling, icl_envelope, icl_scan, nu, nu_bar_estimate, valuation_check
from algebra.series import RingSpec
from algebra.witnesses import (
    irreducibility_exhaustive,
    lower_bound_certificate,
    monomial_witness_family,
    split_witness_family,
)
from lab.parse import parse_ideal, parse_module, parse_poly, parse_system, parse_vector
from lab.report import Report
from utilities.config import DEFAULT_COEFF_HEIGHT
from utilities.utility import set_message

logger = logging.getLogger(__name__)


def _require(args, name: str, command: str):
    value = getattr(args, name, None)
    if value is None:
        raise MissingParameterError(name.replace("_", "-"), command)
    return value


def _ideal_or_module(args, ring: RingSpec, command: str):
    if args.module is not None:
        return parse_module(args.module, ring)
    return parse_ideal(_require(args, "ideal", command), ring)


def _sampling(args) -> Sampling:
    return Sampling(
        mode="exhaustive" if args.exhaustive else "random",
        count=args.samples,
        seed=args.seed,
        height=DEFAULT_COEFF_HEIGHT,
        budget=args.budget,
    )


def _pair_row(pair, kind: str) -> dict:
    return {"kind": kind, "g": pair.g, "h": pair.h, "nu_g": pair.nu_g, "nu_h": pair.nu_h, "nu_gh": pair.nu_gh}


def cmd_ord(args, ring: RingSpec) -> Report:
    x = parse_poly(_require(args, "x", "ord"), ring)
    return Report("ord", ring, result={"x": x, "ord": x.ord()}, certified_up_to=ring.trunc)


def cmd_nu(args, ring: RingSpec) -> Report:
    ideal = parse_ideal(_require(args, "ideal", "nu"), ring)
    x = parse_poly(_require(args, "x", "nu"), ring)
    value = nu(ideal, x)
    if not value.exact:
        set_message("warn", f"x lies in I + m^{ring.trunc + 1}; nu is only known to be {value}")
    return Report("nu", ring, result={"ideal": ideal, "x": x, "nu": value}, certified_up_to=ring.trunc)


def cmd_nubar(args, ring: RingSpec) -> Report:
    ideal = parse_ideal(_require(args, "ideal", "nubar"), ring)
    x = parse_poly(_require(args, "x", "nubar"), ring)
    estimate = nu_bar_estimate(ideal, x, args.n_max)
    for note in estimate.notes:
        set_message("warn", f"truncation-limited: {note}")
    table = [{"n": s.n, "nu": s.order, "ratio": s.ratio} for s in estimate.samples]
    return Report("nubar", ring, result=estimate, certified_up_to=ring.trunc, table=table)


def cmd_ar_index(args, ring: RingSpec) -> Report:
    source = _ideal_or_module(args, ring, "ar-index")
    result = artin_rees_index(source, args.up_to)
    witness = None
    if result.tight_witness is not None:
        level, element = result.tight_witness
        witness = {"i": level, "element": list(element)}
    payload = {
        "i0": result.i0,
        "certified_up_to": result.certified_up_to,
        "module": result.module,
        "tight_witness": witness,
        "sweep": result.sweep,
    }
    return Report(
        "ar-index",
        ring,
        result=payload,
        certified_up_to=result.certified_up_to,
        table=[vars(row) for row in result.sweep],
    )


def cmd_icl_scan(args, ring: RingSpec) -> Report:
    ideal = parse_ideal(_require(args, "ideal", "icl-scan"), ring)
    sampling = _sampling(args)
    if args.envelope:
        envelope = icl_envelope(ideal, args.deg_max, sampling)
        rows = [{"a": r.a, "b_min": r.b_min, "pairs_scanned": r.pairs_scanned} for r in envelope.reports]
        payload = {"envelope": [{"a": a, "b_min": b} for a, b in envelope.envelope], "reports": envelope.reports}
        return Report("icl-scan", ring, result=payload, certified_up_to=ring.trunc, seed=args.seed, table=rows)
    report = icl_scan(ideal, args.deg_max, args.a, sampling)
    if report.violations:
        set_message("warn", f"{len(report.violations)} pair(s) violate every ICL at truncation {ring.trunc}")
    rows = [_pair_row(p, "attaining") for p in report.attaining_pairs]
    rows += [_pair_row(p, "violation") for p in report.violations]
    return Report("icl-scan", ring, result=report, certified_up_to=ring.trunc, seed=args.seed, table=rows)


def cmd_valcheck(args, ring: RingSpec) -> Report:
    ideal = parse_ideal(_require(args, "ideal", "valcheck"), ring)
    check = valuation_check(ideal, args.deg_max, _sampling(args))
    return Report("valcheck", ring, result=check, certified_up_to=ring.trunc, seed=args.seed)


def _certificate_report(command: str, ring: RingSpec, certificate) -> Report:
    if certificate.regularity == "asserted":
        set_message("warn", "regularity of the initial forms was asserted, not verified")
    result = {"verified": certificate.verified, "certificate": certificate}
    return Report(command, ring, result=result, certified_up_to=ring.trunc)


def cmd_solve_linreg(args, ring: RingSpec) -> Report:
    f = parse_vector(_require(args, "f", "solve-linreg"), ring)
    x = parse_vector(_require(args, "x", "solve-linreg"), ring)
    certificate = solve_linear_regular(f, x, _require(args, "i", "solve-linreg"), args.assume_regular)
    return _certificate_report("solve-linreg", ring, certificate)


def cmd_solve_fxhy(args, ring: RingSpec) -> Report:
    values = [parse_poly(_require(args, name, "solve-fxhy"), ring) for name in ("f", "h", "x", "y")]
    certificate = solve_fx_hy(_require(args, "k", "solve-fxhy"), *values, _require(args, "i", "solve-fxhy"))
    return _certificate_report("solve-fxhy", ring, certificate)


def cmd_solve_lin(args, ring: RingSpec) -> Report:
    source = _ideal_or_module(args, ring, "solve-lin")
    x = parse_vector(_require(args, "x", "solve-lin"), ring)
    certificate = solve_linear_artin_rees(source, x, _require(args, "i", "solve-lin"))
    return _certificate_report("solve-lin", ring, certificate)


def cmd_stable_ar(args, ring: RingSpec) -> Report:
    ideal = parse_ideal(args.ideal, ring) if args.ideal else parse_ideal("0", ring)
    xs = parse_vector(_require(args, "xs", "stable-ar"), ring)
    if args.search:
        rows = stable_ar_search(ideal, xs, b_max=args.b_max)
        return Report("stable-ar", ring, result={"grid": rows}, table=[vars(r) for r in rows])
    report = stable_ar_scan(ideal, xs, args.a, args.b)
    if report.skipped:
        set_message("warn", f"{len(report.skipped)} element(s) lie in I at truncation and were skipped")
    if report.infeasible:
        set_message("warn", f"{len(report.infeasible)} element(s) have no feasible level below the truncation")
    rows = [
        {"x": c.x, "nu_x": c.nu_x, "i": c.i, "exponent": c.exponent, "holds": c.holds}
        for c in report.checks
    ]
    payload = {
        "a": report.a,
        "b": report.b,
        "all_hold": report.all_hold,
        "checks": report.checks,
        "skipped": report.skipped,
        "infeasible": report.infeasible,
    }
    return Report("stable-ar", ring, result=payload, table=rows)


def cmd_beta_lb(args, ring: RingSpec) -> Report:
    system = parse_system(_require(args, "system", "beta-lb"), ring)
    if args.i_max is not None:
        levels = range(0, args.i_max + 1)
    else:
        levels = [_require(args, "i", "beta-lb")]
    bounds = [beta_lower_bound_bruteforce(system, i, args.budget) for i in levels]
    rows = [
        {"i": b.i, "beta": b.beta, "nodes_visited": b.nodes_visited, "state_space_size": b.state_space_size}
        for b in bounds
    ]
    result = bounds[0] if len(bounds) == 1 else {"levels": bounds}
    return Report("beta-lb", ring, result=result, certified_up_to=ring.trunc, table=rows)


def _family_payload(family) -> dict:
    return {
        "i": family.i,
        "x1": family.x1,
        "x2": family.x2,
        "x3": family.x3,
        "x4": family.x4,
        "residual": family.residual,
        "residual_order": family.residual_order,
        "divisible_binomials": family.divisible_binomials,
        "x3_congruent_to_t1t2": family.x3_congruent_to_t1t2,
        "x1_initial_not_divisible": family.x1_initial_not_divisible,
        "nu_x1": family.nu_x1,
    }


def cmd_witness(args, ring: RingSpec) -> Report:
    if args.certify or args.i_max is not None:
        i_max = args.i_max if args.i_max is not None else _require(args, "i", "witness")
        primes = tuple(int(p) for p in args.primes.split(",")) if args.certify else ()
        report = lower_bound_certificate(i_max, ring, primes, args.budget)
        for entry in report.entries:
            for note in entry.notes:
                set_message("info" if "cited" in note else "warn", f"i={entry.i}: {note}")
        rows = [
            {
                "i": e.i,
                "residual": e.family.residual,
                "residual_order": e.family.residual_order,
                "nu_x1": e.family.nu_x1,
                "lower_bound": e.lower_bound,
                "certified": e.certified,
            }
            for e in report.entries
        ]
        payload = {
            "statement": report.statement,
            "entries": [
                {
                    "family": _family_payload(e.family),
                    "certificates": e.certificates,
                    "lower_bound": e.lower_bound,
                    "certified": e.certified,
                    "notes": e.notes,
                }
                for e in report.entries
            ],
        }
        return Report("witness", ring, result=payload, table=rows)
    family = monomial_witness_family(_require(args, "i", "witness"), ring)
    if family.divisible_binomials:
        set_message(
            "warn",
            f"binomial coefficients C({family.i},k) vanish mod {ring.char} for k={family.divisible_binomials}",
        )
    return Report("witness", ring, result=_family_payload(family))


def cmd_split_witness(args, ring: RingSpec) -> Report:
    if args.n_max is not None:
        levels = range(1, args.n_max + 1)
    else:
        levels = [_require(args, "n", "split-witness")]
    families = [split_witness_family(n, ring) for n in levels]
    set_message("info", families[0].note)
    rows = [
        {
            "n": w.n,
            "residual_order": w.residual_order,
            "nu_x": w.nu_x,
            "nu_y": w.nu_y,
            "x_outside_I_plus_m3": w.x_outside_I_plus_m3,
            "y_outside_I_plus_m2": w.y_outside_I_plus_m2,
        }
        for w in families
    ]
    result = families[0] if len(families) == 1 else {"levels": families}
    return Report("split-witness", ring, result=result, certified_up_to=ring.trunc, table=rows)


def cmd_power_family(args, ring: RingSpec) -> Report:
    f = parse_poly(_require(args, "f", "power-family"), ring)
    others = parse_vector(args.others, ring) if args.others else ()
    report = power_family_check(
        f,
        others,
        _require(args, "n", "power-family"),
        _require(args, "t", "power-family"),
        args.c,
    )
    for note in report.notes:
        set_message("warn" if "larger" in note else "info", note)
    rows = None
    payload = {"check": report, "formula": report.bound.formula.expression}
    if args.i_max is not None:
        rows = [{"i": i, "value": v} for i, v in report.bound.table(args.i_max)]
        payload["values"] = rows
    return Report("power-family", ring, result=payload, certified_up_to=report.colon_compared_up_to, table=rows)


def cmd_irr_check(args, ring: RingSpec) -> Report:
    i = _require(args, "i", "irr-check")
    p = args.p if args.p is not None else ring.char
    if not p:
        raise MissingParameterError("p", "irr-check")
    certificate = irreducibility_exhaustive(i, p, max(ring.num_vars, 3), args.budget)
    if certificate.factorizations_found:
        set_message("warn", f"T1*T2 - T3^{i} factors modulo m^{i + 1} over GF({p})")
    return Report("irr-check", ring, params={"p": p}, result=certificate)


def _bound_params(args) -> BoundParams:
    return BoundParams(
        a=args.a_param,
        b=args.b_param,
        c=args.c,
        i_I=args.iI,
        i_P=args.iP,
        i_Jn=args.iJn,
        n=args.n,
        t=args.t,
        k=args.k,
        ord_g=args.ord_g,
        max_ord=args.max_ord,
        nu_x=args.nu,
    )


def cmd_bound(args, ring: RingSpec) -> Report:
    bound = BoundFunction(args.formula, _bound_params(args))
    if args.i_max is not None:
        rows = [{"i": i, "value": v} for i, v in bound.table(args.i_max)]
        return Report("bound", None, result={"formula": bound.formula.expression, "values": rows}, table=rows)
    i = _require(args, "i", "bound")
    return Report(
        "bound",
        None,
        result={"formula": bound.formula.expression, "i": i, "value": bound.evaluate(i)},
    )


def _parse_measured(text: str) -> list[tuple[int, Fraction]]:
    points = []
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        left, sep, right = chunk.partition(":")
        if not sep:
            raise ParseError(f"expected 'i:value', got '{chunk.strip()}'", text.find(chunk))
        try:
            points.append((int(left), Fraction(right.strip())))
        except ValueError:
            raise ParseError(f"expected 'i:value', got '{chunk.strip()}'", text.find(chunk)) from None
    return points


def cmd_cross_check(args, ring: RingSpec) -> Report:
    kind = args.kind
    if args.measured is not None:
        empirical = _parse_measured(args.measured)
    elif args.witness is not None:
        report = lower_bound_certificate(args.witness, ring, (), args.budget)
        empirical = [(e.i, e.lower_bound) for e in report.entries]
        kind = "lower"
    elif args.system is not None:
        system = parse_system(args.system, ring)
        i_max = _require(args, "i_max", "cross-check")
        empirical = [(i, beta_lower_bound_bruteforce(system, i, args.budget).beta) for i in range(i_max + 1)]
        # β_D only bounds the Artin function from below
        kind = "lower"
    else:
        raise MissingParameterError("measured", "cross-check")
    if not empirical:
        raise PreconditionError("no measured points to compare")
    report = cross_check_bound(args.formula, _bound_params(args), empirical, kind)
    if report.flagged:
        set_message("warn", f"{report.verdict} at i={report.flagged}")
    rows = [vars(row) for row in report.rows]
    return Report("cross-check", ring, result=report, table=rows)


HANDLERS = {
    "ord": cmd_ord,
    "nu": cmd_nu,
    "nubar": cmd_nubar,
    "ar-index": cmd_ar_index,
    "icl-scan": cmd_icl_scan,
    "valcheck": cmd_valcheck,
    "solve-linreg": cmd_solve_linreg,
    "solve-fxhy": cmd_solve_fxhy,
    "solve-lin": cmd_solve_lin,
    "stable-ar": cmd_stable_ar,
    "beta-lb": cmd_beta_lb,
    "witness": cmd_witness,
    "split-witness": cmd_split_witness,
    "power-family": cmd_power_family,
    "irr-check": cmd_irr_check,
    "bound": cmd_bound,
    "cross-check": cmd_cross_check,
}
