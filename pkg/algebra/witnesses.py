"""Witness families: the quadratic lower bound for X1X2 - X3X4 and the split
family showing XY - fZ has no Artin function over a non-complete ring."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from algebra.errors import BudgetExceededError, PreconditionError, TruncationError
from algebra.orders import nu
from algebra.series import ExtOrder, RingSpec, TruncatedSeries
from algebra.subspace import IdealSpec
from utilities.config import CERTIFICATE_PRIMES, DEFAULT_BUDGET

logger = logging.getLogger(__name__)


@dataclass
class WitnessFamily:
    i: int
    x1: TruncatedSeries
    x2: TruncatedSeries
    x3: TruncatedSeries
    x4: TruncatedSeries
    residual: TruncatedSeries
    residual_order: ExtOrder
    divisible_binomials: list[int] = field(default_factory=list)
    x3_congruent_to_t1t2: bool = True
    x1_initial_not_divisible: bool = True
    nu_x1: ExtOrder | None = None


def monomial_witness_family(i: int, ring: RingSpec) -> WitnessFamily:
    """x1 = T1^i, x2 = T2^i, x3 = T1T2 - T3^i and x4 with x1x2 - x3x4 = T3^{i^2}."""
    if ring.num_vars < 3:
        raise PreconditionError("the witness family needs at least three variables")
    if i < 1:
        raise PreconditionError(f"i must be >= 1, got {i}")
    if i * i > ring.trunc:
        raise TruncationError(f"i^2 = {i * i} exceeds D = {ring.trunc}")
    t1, t2, t3 = (ring.variable(k) for k in range(3))
    x1 = t1**i
    x2 = t2**i
    x3 = t1 * t2 - t3**i
    # (x3 + T3^i)^i - T3^{i^2}, divided by x3
    x4 = ring.zero()
    x3_power = ring.one()
    for k in range(1, i + 1):
        x4 = x4 + (x3_power * t3 ** (i * (i - k))).scale(comb(i, k))
        x3_power = x3_power * x3
    residual = x1 * x2 - x3 * x4
    divisible = [k for k in range(1, i + 1) if ring.char and comb(i, k) % ring.char == 0]
    initial = x1.initial_form()
    # ν <= i is decided modulo m^{i+1}
    small_x3 = x3.with_trunc(i)
    nu_x1 = nu(IdealSpec(small_x3.ring, (small_x3,)), x1.with_trunc(i))
    return WitnessFamily(
        i=i,
        x1=x1,
        x2=x2,
        x3=x3,
        x4=x4,
        residual=residual,
        residual_order=residual.ord(),
        divisible_binomials=divisible,
        x3_congruent_to_t1t2=(x3 - t1 * t2).ord() >= i,
        x1_initial_not_divisible=initial.divide_by_monomial((1, 1) + (0,) * (ring.num_vars - 2)) is None,
        nu_x1=nu_x1,
    )


def sqrt_one_plus(ring: RingSpec, var: int, n: int) -> TruncatedSeries:
    """√(1 + T) in the given variable, cut after degree n."""
    coeff = Fraction(1)
    terms = {}
    for k in range(n + 1):
        exps = [0] * ring.num_vars
        exps[var] = k
        terms[tuple(exps)] = coeff
        coeff = coeff * (Fraction(1, 2) - k) / (k + 1)
    return TruncatedSeries(ring, terms)


@dataclass
class SplitWitness:
    """x, y, z nearly solving XY - fZ = 0 for f = T1^2 - T2^2(1+T2)."""

    n: int
    f: TruncatedSeries
    x: TruncatedSeries
    y: TruncatedSeries
    z: TruncatedSeries
    residual: TruncatedSeries
    residual_order: ExtOrder
    nu_x: ExtOrder
    nu_y: ExtOrder
    x_outside_I_plus_m3: bool
    y_outside_I_plus_m2: bool
    note: str


def split_witness_family(n: int, ring: RingSpec) -> SplitWitness:
    """x = T1(T1 - T2 s), y = T1 + T2 s, z = T1 with s the degree-n cut of √(1+T2).

    The residual xy - fz = T1 T2^2 (1 + T2 - s^2) lies in m^{n+4}, while x and y stay
    at bounded distance from (f).
    """
    if ring.num_vars < 2:
        raise PreconditionError("the split witness needs at least two variables")
    if ring.char == 2:
        raise PreconditionError("√(1+T2) needs a characteristic other than 2")
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if n + 4 > ring.trunc:
        raise TruncationError(f"n + 4 = {n + 4} exceeds D = {ring.trunc}")
    t1, t2 = ring.variable(0), ring.variable(1)
    s = sqrt_one_plus(ring, 1, n)
    f = t1**2 - t2**2 * (ring.one() + t2)
    x = t1 * (t1 - t2 * s)
    y = t1 + t2 * s
    z = t1
    residual = x * y - f * z
    ideal = IdealSpec(ring, (f,))
    nu_x = nu(ideal, x)
    nu_y = nu(ideal, y)
    return SplitWitness(
        n=n,
        f=f,
        x=x,
        y=y,
        z=z,
        residual=residual,
        residual_order=residual.ord(),
        nu_x=nu_x,
        nu_y=nu_y,
        x_outside_I_plus_m3=nu_x < 3,
        y_outside_I_plus_m2=nu_y < 2,
        note=(
            "f is irreducible in the localized polynomial ring, so XY - fZ has no Artin function "
            "there; in k[[T]] f splits and (x, y, z) converges to a formal solution"
        ),
    )


@dataclass
class IrreducibilityCertificate:
    i: int
    p: int
    search_space_size: int
    factorizations_found: int
    nodes_visited: int
    method: str
    counterexample: tuple[TruncatedSeries, TruncatedSeries] | None = None


def _homogeneous_choices(ring: RingSpec, degree: int) -> list[TruncatedSeries]:
    monomials = ring.monomials(degree)
    return [
        TruncatedSeries(ring, dict(zip(monomials, coeffs)))
        for coeffs in itertools.product(range(ring.char), repeat=len(monomials))
    ]


def irreducibility_exhaustive(
    i: int,
    p: int,
    num_vars: int = 3,
    budget: int = DEFAULT_BUDGET,
) -> IrreducibilityCertificate:
    """Count non-unit pairs (x, y) with xy ≡ T1T2 - T3^i mod m^{i+1} over GF(p).

    Only the homogeneous parts of degrees 1..i-1 matter; they are fixed one degree at
    a time and a branch is cut as soon as the next degree of xy disagrees.
    """
    if i < 1:
        raise PreconditionError(f"i must be >= 1, got {i}")
    if num_vars < 3:
        raise PreconditionError("the certificate needs at least three variables")
    ring = RingSpec(num_vars, p, trunc=i)
    coefficients = sum(len(ring.monomials(d)) for d in range(1, i))
    space = p ** (2 * coefficients)
    if space > budget:
        raise BudgetExceededError(space, budget, "irreducibility enumeration")
    t1, t2, t3 = (ring.variable(k) for k in range(3))
    target = t1 * t2 - t3**i
    method = (
        f"exhaustive enumeration over GF({p}) of homogeneous parts of degrees 1..{i - 1} "
        "with pruning on each degree of the product"
    )
    parts_x: list[TruncatedSeries] = []
    parts_y: list[TruncatedSeries] = []
    state = {"found": 0, "visited": 0, "example": None}

    def product_part(degree: int) -> TruncatedSeries:
        total = ring.zero()
        for a in range(1, degree):
            b = degree - a
            if a <= len(parts_x) and b <= len(parts_y):
                total = total + parts_x[a - 1] * parts_y[b - 1]
        return total

    def walk(d: int) -> None:
        if d == i:
            state["found"] += 1
            if state["example"] is None:
                state["example"] = (sum(parts_x, ring.zero()), sum(parts_y, ring.zero()))
            return
        choices = _homogeneous_choices(ring, d)
        for xd, yd in itertools.product(choices, repeat=2):
            state["visited"] += 1
            parts_x.append(xd)
            parts_y.append(yd)
            if product_part(d + 1) == target.homogeneous_part(d + 1):
                walk(d + 1)
            parts_x.pop()
            parts_y.pop()

    # a product of two non-units has no linear part
    if not target.homogeneous_part(1):
        walk(1)
    logger.info("irreducibility i=%d p=%d: %d factorizations, %d nodes", i, p, state["found"], state["visited"])
    return IrreducibilityCertificate(
        i=i,
        p=p,
        search_space_size=space,
        factorizations_found=state["found"],
        nodes_visited=state["visited"],
        method=method,
        counterexample=state["example"],
    )


@dataclass
class LowerBoundEntry:
    i: int
    family: WitnessFamily
    certificates: list[IrreducibilityCertificate]
    lower_bound: int
    certified: bool
    notes: list[str] = field(default_factory=list)


@dataclass
class LowerBoundReport:
    entries: list[LowerBoundEntry]
    statement: str


def lower_bound_certificate(
    i_max: int,
    ring: RingSpec,
    primes: Sequence[int] = CERTIFICATE_PRIMES,
    budget: int = DEFAULT_BUDGET,
) -> LowerBoundReport:
    """Both ingredients of β(i) >= i^2 - 1 for every i <= i_max."""
    if i_max < 1:
        raise PreconditionError(f"i_max must be >= 1, got {i_max}")
    if i_max * i_max > ring.trunc:
        raise TruncationError(f"i_max^2 = {i_max * i_max} exceeds D = {ring.trunc}")
    entries = []
    for i in range(1, i_max + 1):
        family = monomial_witness_family(i, ring)
        certificates = []
        notes = []
        for p in primes:
            try:
                certificates.append(irreducibility_exhaustive(i, p, ring.num_vars, budget))
            except BudgetExceededError as exc:
                notes.append(f"GF({p}) check skipped: {exc}")
        exact = family.residual_order == i * i and family.nu_x1 == i
        irreducible = any(c.factorizations_found == 0 for c in certificates)
        if ring.char == 0:
            notes.append("irreducibility over QQ is cited, machine-checked over small prime fields only")
        entries.append(
            LowerBoundEntry(
                i=i,
                family=family,
                certificates=certificates,
                lower_bound=i * i - 1,
                certified=exact and irreducible,
                notes=notes,
            )
        )
    certified = [e.i for e in entries if e.certified]
    statement = f"beta(i) >= i^2 - 1 for i in {certified}" if certified else "no level certified"
    return LowerBoundReport(entries, statement)
