"""Order functions of an ideal: ν_I, the Rees estimate ν̄_I, ICL scans and the
valuation test."""
from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from algebra.errors import BudgetExceededError, IncompatibleRingsError, PreconditionError
from algebra.series import ExtOrder, RingSpec, TruncatedSeries, random_series
from algebra.subspace import IdealSpec, distance_order, span_ideal
from utilities.config import (
    A_GRID,
    DEFAULT_BUDGET,
    DEFAULT_COEFF_HEIGHT,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SEED,
)

logger = logging.getLogger(__name__)

UNBOUNDED = "unbounded-at-truncation"


def nu(ideal: IdealSpec, x: TruncatedSeries) -> ExtOrder:
    """ν_I(x) = max{n : x ∈ I + m^n}."""
    if x.ring != ideal.ring:
        raise IncompatibleRingsError()
    return distance_order(x, span_ideal(ideal))


@dataclass(frozen=True)
class ReesSample:
    n: int
    order: ExtOrder
    ratio: Fraction | None


@dataclass
class ReesEstimate:
    x: TruncatedSeries
    n_max: int
    estimate: Fraction | None
    nu_x: ExtOrder
    samples: list[ReesSample]
    truncation_limited: bool
    notes: list[str] = field(default_factory=list)


def nu_bar_estimate(ideal: IdealSpec, x: TruncatedSeries, n_max: int) -> ReesEstimate:
    """max_{n <= n_max} ν_I(x^n)/n, a lower estimate of the Rees order ν̄_I(x)."""
    if x.ring != ideal.ring:
        raise IncompatibleRingsError()
    if not x:
        raise PreconditionError("the Rees estimate needs a nonzero element")
    if n_max < 1:
        raise PreconditionError(f"n_max must be >= 1, got {n_max}")
    ring = x.ring
    span = span_ideal(ideal)
    samples = []
    notes = []
    best = None
    limited = False
    x_power = ring.one()
    for n in range(1, n_max + 1):
        x_power = x_power * x
        order = distance_order(x_power, span)
        if order.exact:
            ratio = Fraction(order.value, n)
            best = ratio if best is None else max(best, ratio)
        else:
            ratio = None
            limited = True
            notes.append(f"nu(x^{n}) is {order} at truncation {ring.trunc}")
        samples.append(ReesSample(n, order, ratio))
    if best is not None and best * n_max > ring.trunc:
        limited = True
        notes.append(f"n_max * estimate = {best * n_max} exceeds the truncation {ring.trunc}")
    return ReesEstimate(x, n_max, best, samples[0].order, samples, limited, notes)


@dataclass(frozen=True)
class Sampling:
    """How the elements g, h of a scan are chosen."""

    mode: str = "random"
    count: int = DEFAULT_SAMPLE_COUNT
    seed: int = DEFAULT_SEED
    height: int = DEFAULT_COEFF_HEIGHT
    budget: int = DEFAULT_BUDGET


def sample_elements(ring: RingSpec, deg_max: int, sampling: Sampling) -> list[TruncatedSeries]:
    """Monomials of degree 1..deg_max followed by random or exhaustive elements of m."""
    exponents = list(ring.monomials_between(1, deg_max))
    if sampling.mode == "exhaustive":
        if ring.char == 0:
            raise PreconditionError("exhaustive sampling requires a prime field")
        size = ring.char ** len(exponents) - 1
        pairs = size * (size + 1) // 2
        if pairs > sampling.budget:
            raise BudgetExceededError(pairs, sampling.budget, "exhaustive pair scan")
        elements = []
        for coeffs in itertools.product(range(ring.char), repeat=len(exponents)):
            if any(coeffs):
                elements.append(TruncatedSeries(ring, dict(zip(exponents, coeffs))))
        return elements
    if sampling.mode != "random":
        raise PreconditionError(f"unknown sampling mode '{sampling.mode}'")
    elements = [ring.monomial(e) for e in exponents]
    seen = set(elements)
    rng = random.Random(sampling.seed)
    attempts = 0
    added = 0
    while added < sampling.count and attempts < 20 * sampling.count + 20:
        attempts += 1
        candidate = random_series(ring, rng, 1, deg_max, sampling.height)
        if candidate and candidate not in seen:
            seen.add(candidate)
            elements.append(candidate)
            added += 1
    pairs = len(elements) * (len(elements) + 1) // 2
    if pairs > sampling.budget:
        raise BudgetExceededError(pairs, sampling.budget, "pair scan")
    return elements


@dataclass(frozen=True)
class PairOrders:
    g: TruncatedSeries
    h: TruncatedSeries
    nu_g: ExtOrder
    nu_h: ExtOrder
    nu_gh: ExtOrder


@dataclass
class PairScan:
    pairs: list[PairOrders]
    skipped: int
    elements: int


def _check_scan_degree(ring: RingSpec, deg_max: int) -> None:
    if deg_max < 1 or 2 * deg_max > ring.trunc:
        raise PreconditionError(
            f"scan degree must satisfy 1 <= deg_max and 2*deg_max <= D, got deg_max={deg_max}, D={ring.trunc}"
        )


def scan_pairs(ideal: IdealSpec, deg_max: int, sampling: Sampling) -> PairScan:
    """ν of g, h and gh for all unordered sampled pairs with ν(g), ν(h) exact."""
    ring = ideal.ring
    _check_scan_degree(ring, deg_max)
    elements = sample_elements(ring, deg_max, sampling)
    span = span_ideal(ideal)
    orders = [distance_order(g, span) for g in elements]
    pairs = []
    skipped = 0
    for a in range(len(elements)):
        for b in range(a, len(elements)):
            if not (orders[a].exact and orders[b].exact):
                skipped += 1
                continue
            product = elements[a] * elements[b]
            pairs.append(
                PairOrders(elements[a], elements[b], orders[a], orders[b], distance_order(product, span))
            )
    logger.info("scanned %d pairs over %d elements (%d skipped)", len(pairs), len(elements), skipped)
    return PairScan(pairs, skipped, len(elements))


@dataclass
class IclReport:
    ideal: IdealSpec
    a: Fraction
    b_min: int | str
    max_excess: Fraction | None
    attaining_pairs: list[PairOrders]
    violations: list[PairOrders]
    scan_degree: int
    pairs_scanned: int
    skipped_pairs: int
    sampling: Sampling
    certified_note: str
    # pairs with gh in I + m^{D+1} that the cutoff keeps from counting as violations
    hidden_by_truncation: int = 0


def _icl_from_pairs(ideal: IdealSpec, scan: PairScan, a: Fraction, deg_max: int, sampling: Sampling) -> IclReport:
    ring = ideal.ring
    excesses = []
    pending = []
    for pair in scan.pairs:
        if pair.nu_gh.exact:
            excesses.append((pair, pair.nu_gh.value - a * (pair.nu_g.value + pair.nu_h.value)))
        else:
            pending.append(pair)
    max_excess = max((e for _, e in excesses), default=None)
    b_min = max(0, math.ceil(max_excess)) if max_excess is not None else 0
    attaining = [pair for pair, e in excesses if e == b_min]
    # an AtLeast(D+1) product is only a violation when the cutoff cannot explain it
    violations, hidden = [], []
    for pair in pending:
        explained = ring.trunc + 1 - a * (pair.nu_g.value + pair.nu_h.value) <= b_min
        (hidden if explained else violations).append(pair)
    note = (
        f"scan-certified over {len(scan.pairs)} pairs of elements of degree <= {deg_max} "
        f"({sampling.mode} sampling, seed {sampling.seed}) at truncation {ring.trunc}; "
        "not a proof for all g, h"
    )
    if hidden:
        exposed_at = min(math.floor(a * (p.nu_g.value + p.nu_h.value) + b_min) for p in hidden)
        note += (
            f"; {len(hidden)} pair(s) with gh in I + m^{ring.trunc + 1} are not counted as violations "
            f"since D + 1 <= a(nu(g) + nu(h)) + b_min, a violation among them needs D >= {exposed_at}"
        )
    return IclReport(
        ideal=ideal,
        a=a,
        b_min=UNBOUNDED if violations else b_min,
        max_excess=max_excess,
        attaining_pairs=attaining,
        violations=violations,
        scan_degree=deg_max,
        pairs_scanned=len(scan.pairs),
        skipped_pairs=scan.skipped,
        sampling=sampling,
        certified_note=note,
        hidden_by_truncation=len(hidden),
    )


def _slope(a) -> Fraction:
    a = Fraction(a)
    if a < 1:
        raise PreconditionError(f"ICL slope a must be >= 1, got {a}")
    return a


def icl_scan(
    ideal: IdealSpec,
    deg_max: int,
    a: Fraction | int | str = 1,
    sampling: Sampling | None = None,
) -> IclReport:
    """Smallest b with ν(gh) <= a(ν(g)+ν(h)) + b over the scanned pairs."""
    a = _slope(a)
    sampling = sampling or Sampling()
    scan = scan_pairs(ideal, deg_max, sampling)
    return _icl_from_pairs(ideal, scan, a, deg_max, sampling)


@dataclass
class IclEnvelope:
    reports: list[IclReport]
    envelope: list[tuple[Fraction, int]]


def icl_envelope(
    ideal: IdealSpec,
    deg_max: int,
    sampling: Sampling | None = None,
    a_grid: Sequence = A_GRID,
) -> IclEnvelope:
    """icl_scan over a grid of slopes; the envelope keeps the non-dominated (a, b_min)."""
    sampling = sampling or Sampling()
    scan = scan_pairs(ideal, deg_max, sampling)
    reports = [_icl_from_pairs(ideal, scan, _slope(a), deg_max, sampling) for a in a_grid]
    finite = [(r.a, r.b_min) for r in reports if isinstance(r.b_min, int)]
    envelope = [
        (a, b)
        for a, b in finite
        if not any((a2 <= a and b2 < b) or (a2 < a and b2 <= b) for a2, b2 in finite)
    ]
    return IclEnvelope(reports, envelope)


@dataclass
class ValuationCheck:
    holds: bool
    counterexample: PairOrders | None
    pairs_checked: int


def valuation_check(
    ideal: IdealSpec,
    deg_max: int,
    sampling: Sampling | None = None,
) -> ValuationCheck:
    """Whether ν(gh) = ν(g) + ν(h) on every scanned pair with ν(g)+ν(h) <= D."""
    ring = ideal.ring
    _check_scan_degree(ring, deg_max)
    sampling = sampling or Sampling()
    elements = sample_elements(ring, deg_max, sampling)
    span = span_ideal(ideal)
    orders = [distance_order(g, span) for g in elements]
    checked = 0
    for a in range(len(elements)):
        for b in range(a, len(elements)):
            if not (orders[a].exact and orders[b].exact):
                continue
            expected = orders[a] + orders[b]
            if expected.value > ring.trunc:
                continue
            checked += 1
            got = distance_order(elements[a] * elements[b], span)
            if got != expected:
                pair = PairOrders(elements[a], elements[b], orders[a], orders[b], got)
                return ValuationCheck(False, pair, checked)
    return ValuationCheck(True, None, checked)


def superadditivity_holds(ideal: IdealSpec, g: TruncatedSeries, h: TruncatedSeries) -> bool:
    """ν(gh) >= ν(g) + ν(h) whenever the right side is at most D."""
    span = span_ideal(ideal)
    expected = distance_order(g, span) + distance_order(h, span)
    if not expected.exact or expected.value > ideal.ring.trunc:
        return True
    return distance_order(g * h, span) >= expected
