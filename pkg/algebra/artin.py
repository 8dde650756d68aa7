"""Artin–Rees indices, constructive correction solvers, stable Artin–Rees scans
and brute-force lower bounds for Artin functions at truncation.

Every statement is checked in A_D = k[T]/m^{D+1}. Results carry the range in
which the truncation cannot create spurious intersections.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from algebra.bounds import BoundFunction, BoundParams
from algebra.errors import (
    ApproximationLevelError,
    ArtinLabError,
    BudgetExceededError,
    CertifiedRangeError,
    IncompatibleRingsError,
    NonRegularError,
    PreconditionError,
    TruncationError,
)
from algebra.orders import nu
from algebra.series import Exponents, ExtOrder, RingSpec, TruncatedSeries, power
from algebra.subspace import (
    IdealSpec,
    ModuleSpec,
    colon_by,
    contains,
    member,
    coordinate_index,
    solve_affine,
    span_ideal,
    span_module,
    span_module_times_m_power,
)
from utilities.config import A_GRID, DEFAULT_BUDGET

logger = logging.getLogger(__name__)


def _as_module(source: ModuleSpec | IdealSpec) -> ModuleSpec:
    return source.as_module() if isinstance(source, IdealSpec) else source


# Artin–Rees index


@dataclass(frozen=True)
class ArSweepRow:
    i: int
    intersection_dim: int
    largest_power: int  # largest k with (M ∩ m^i) ⊆ m^k·M


@dataclass
class ArIndexResult:
    i0: int
    certified_up_to: int
    tight_witness: tuple[int, tuple[TruncatedSeries, ...]] | None
    module: ModuleSpec
    sweep: list[ArSweepRow] = field(default_factory=list)


def artin_rees_index(source: ModuleSpec | IdealSpec, up_to: int | None = None) -> ArIndexResult:
    """Smallest i0 with M ∩ m^i ⊆ m^{max(i-i0, 0)}·M for every i in the certified range."""
    module = _as_module(source)
    ring = module.ring
    certified = ring.trunc - module.max_degree()
    if certified < 0:
        raise CertifiedRangeError(
            f"generators of degree {module.max_degree()} exceed the truncation {ring.trunc}"
        )
    if up_to is not None:
        if not 0 <= up_to <= certified:
            raise CertifiedRangeError(f"up_to={up_to} outside the certified range 0..{certified}")
        certified = up_to
    span = span_module(module)
    i0 = 0
    witness = None
    sweep = []
    for i in range(certified + 1):
        layer = span.filtration(i)
        k = i
        while k > 0 and not contains(span_module_times_m_power(module, k), layer):
            k -= 1
        sweep.append(ArSweepRow(i, layer.dim, k))
        if i - k > i0:
            i0 = i - k
            outside = span_module_times_m_power(module, k + 1)
            row = next(r for r in layer.rows if not outside.contains_vector(r))
            witness = (i, layer.index.decode(row))
    logger.info("artin-rees index %d certified up to %d", i0, certified)
    return ArIndexResult(i0, certified, witness, module, sweep)


# solvers


@dataclass
class SolveCertificate:
    method: str
    level_i: int
    input: tuple[TruncatedSeries, ...]
    output: tuple[TruncatedSeries, ...]
    proximity: list[ExtOrder]
    required: list[int]
    input_residual_order: ExtOrder
    residual_order: ExtOrder
    residual_is_zero: bool
    regularity: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.residual_is_zero and all(
            p >= r for p, r in zip(self.proximity, self.required)
        )


def _check_rings(items: Sequence[TruncatedSeries]) -> RingSpec:
    ring = items[0].ring
    for item in items:
        if item.ring != ring:
            raise IncompatibleRingsError()
    return ring


def _linear_residual(f: Sequence[TruncatedSeries], x: Sequence[TruncatedSeries]) -> TruncatedSeries:
    total = f[0].ring.zero()
    for fj, xj in zip(f, x):
        total = total + fj * xj
    return total


def _monomial_regular(initials: Sequence[TruncatedSeries]) -> bool:
    """Monomials in pairwise disjoint variables form a regular sequence."""
    used: set[int] = set()
    for form in initials:
        if not form.is_monomial():
            return False
        support = form.support_variables()
        if not support or support & used:
            return False
        used |= support
    return True


def _koszul_correction(
    initials: Sequence[TruncatedSeries],
    orders: Sequence[int],
    current: Sequence[TruncatedSeries],
    active: Sequence[int],
    mu: int,
) -> dict[tuple[int, int], TruncatedSeries]:
    """Antisymmetric homogeneous z(k, j), k < j, with in(x_j) = Σ_k in(f_k) z(k, j)."""
    ring = initials[0].ring
    K = ring.domain
    unknowns: list[tuple[tuple[int, int], Exponents]] = []
    for k, j in itertools.combinations(active, 2):
        for v in ring.monomials(mu - orders[k] - orders[j]):
            unknowns.append(((k, j), v))
    equations: dict[tuple[int, Exponents], int] = {}
    for j in active:
        for w in ring.monomials(mu - orders[j]):
            equations[(j, w)] = len(equations)
    rows: list[dict[int, object]] = [{} for _ in equations]

    def add(equation: tuple[int, Exponents], column: int, value) -> None:
        row = rows[equations[equation]]
        total = row.get(column, K.zero) + value
        if total:
            row[column] = total
        else:
            row.pop(column, None)

    for column, ((k, j), v) in enumerate(unknowns):
        for e, c in initials[k].shifted(v).terms.items():
            add((j, e), column, c)
        for e, c in initials[j].shifted(v).terms.items():
            add((k, e), column, -c)
    rhs = [K.zero] * len(equations)
    for (j, w), r in equations.items():
        rhs[r] = current[j].coefficient(w)
    solution = solve_affine(K, rows, rhs, len(unknowns))
    if solution is None:
        raise NonRegularError(f"no Koszul correction in degree {mu}")
    z: dict[tuple[int, int], dict] = {}
    for column, value in solution.particular.items():
        pair, v = unknowns[column]
        z.setdefault(pair, {})[v] = value
    return {pair: TruncatedSeries._raw(ring, terms) for pair, terms in z.items()}


def solve_linear_regular(
    f: Sequence[TruncatedSeries],
    x: Sequence[TruncatedSeries],
    i: int,
    assume_regular: bool = False,
) -> SolveCertificate:
    """Exact solution of Σ f_j X_j = 0 near x when the initial forms of f are regular.

    Requires ord f_1 <= ... <= ord f_n and Σ f_j x_j ∈ m^{i + ord f_n + 1}; returns x̄
    with x̄_j - x_j ∈ m^{i + ord f_n - ord f_j + 1}.
    """
    f = tuple(f)
    x = tuple(x)
    if not f or len(f) != len(x):
        raise PreconditionError("need as many approximate values as generators")
    ring = _check_rings(f + x)
    if i < 0:
        raise PreconditionError(f"level i must be >= 0, got {i}")
    if any(not fj for fj in f):
        raise PreconditionError("generators must be nonzero")
    orders = [fj.ord().value for fj in f]
    if any(o < 1 for o in orders):
        raise PreconditionError("generators must lie in the maximal ideal")
    if orders != sorted(orders):
        raise PreconditionError("generators must be sorted by increasing order")
    top = orders[-1]
    bound = i + top + 1
    if bound > ring.trunc + 1:
        raise CertifiedRangeError(
            f"i + ord(f_n) + 1 = {bound} exceeds the truncation range D + 1 = {ring.trunc + 1}"
        )
    initials = [fj.initial_form() for fj in f]
    if _monomial_regular(initials):
        regularity = "verified"
    elif assume_regular:
        regularity = "asserted"
    else:
        raise NonRegularError(
            "initial forms are not monomials in disjoint variables; pass assume_regular to trust them"
        )
    residual = _linear_residual(f, x)
    input_order = residual.ord()
    if input_order < bound:
        raise ApproximationLevelError(
            f"residual has order {input_order}, need at least {bound}"
        )
    current = list(x)
    for _ in range(ring.trunc + 2):
        weights = [ExtOrder(o) + c.ord() for o, c in zip(orders, current)]
        mu = min(weights)
        if mu >= bound:
            break
        active = [j for j, w in enumerate(weights) if w == mu]
        z = _koszul_correction(initials, orders, current, active, mu.value)
        for (k, j), zkj in z.items():
            current[j] = current[j] - f[k] * zkj
            current[k] = current[k] + f[j] * zkj
        logger.debug("koszul step in degree %d over %d active indices", mu.value, len(active))
    else:
        raise ArtinLabError("correction did not terminate")
    output = tuple(xj - cj for xj, cj in zip(x, current))
    final = _linear_residual(f, output)
    required = [i + top - o + 1 for o in orders]
    return SolveCertificate(
        method="koszul degree-by-degree correction",
        level_i=i,
        input=x,
        output=output,
        proximity=[c.ord() for c in current],
        required=required,
        input_residual_order=input_order,
        residual_order=final.ord(),
        residual_is_zero=not final,
        regularity=regularity,
    )


def divide_by_leading_power(
    h: TruncatedSeries, f: TruncatedSeries, k: int
) -> tuple[TruncatedSeries, TruncatedSeries]:
    """h = a·f + h' with no monomial of h' divisible by T1^k (f = T1^k + higher)."""
    ring = h.ring
    quotient = ring.zero()
    rest = h
    while True:
        divisible = [e for e in rest.terms if e[0] >= k]
        if not divisible:
            return quotient, rest
        e = min(divisible, key=lambda m: (sum(m), tuple(-v for v in m)))
        step = ring.monomial((e[0] - k,) + e[1:], rest.coefficient(e))
        quotient = quotient + step
        rest = rest - step * f


def solve_fx_hy(
    k: int,
    f: TruncatedSeries,
    h: TruncatedSeries,
    x: TruncatedSeries,
    y: TruncatedSeries,
    i: int,
) -> SolveCertificate:
    """Exact solution of fX + hY = 0 near (x, y) for f = T1^k + g, ord g = k+1, T1 ∤ in(g)."""
    ring = _check_rings((f, h, x, y))
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    if i < 0:
        raise PreconditionError(f"level i must be >= 0, got {i}")
    lead = [0] * ring.num_vars
    lead[0] = k
    g = f - ring.monomial(tuple(lead))
    if g.ord() != k + 1:
        raise PreconditionError(f"f - T1^{k} must have order {k + 1}, got {g.ord()}")
    if all(e[0] >= 1 for e in g.initial_form().terms):
        raise PreconditionError("T1 divides the initial form of f - T1^k")
    nu_h = nu(IdealSpec(ring, (f,)), h)
    if not nu_h.exact:
        raise PreconditionError("h lies in (f) at this truncation; the bound is infinite")
    shift = max(k, nu_h.value + 1)
    bound = i + shift + 1
    if bound > ring.trunc + 1:
        raise CertifiedRangeError(
            f"i + max(k, nu(h)+1) + 1 = {bound} exceeds D + 1 = {ring.trunc + 1}"
        )
    residual = f * x + h * y
    input_order = residual.ord()
    if input_order < bound:
        raise ApproximationLevelError(f"residual has order {input_order}, need at least {bound}")

    a, h_rest = divide_by_leading_power(h, f, k)
    threshold = i + shift - k + 1
    x_rest = x + a * y
    y_rest = y
    z = ring.zero()
    for _ in range(ring.trunc + 2):
        if x_rest.ord() >= threshold:
            break
        if not y_rest:
            raise ApproximationLevelError("x stays below the threshold while y vanishes")
        leading = y_rest.initial_form()
        z0 = leading.divide_by_monomial(tuple(lead))
        if z0 is None:
            raise ApproximationLevelError(f"leading part {leading} of y is not divisible by T1^{k}")
        z0 = -z0
        x_rest = x_rest - h_rest * z0
        y_rest = y_rest + f * z0
        z = z + z0
    else:
        raise ArtinLabError("elimination did not terminate")
    x_bar = h * z
    y_bar = -(f * z)
    final = f * x_bar + h * y_bar
    return SolveCertificate(
        method="successive T1^k-divisibility elimination",
        level_i=i,
        input=(x, y),
        output=(x_bar, y_bar),
        proximity=[(x_bar - x).ord(), (y_bar - y).ord()],
        required=[i + 1, i + 1],
        input_residual_order=input_order,
        residual_order=final.ord(),
        residual_is_zero=not final,
        notes=[f"nu_(f)(h) = {nu_h}", f"z = {z}"],
    )


def solve_linear_artin_rees(
    source: ModuleSpec | IdealSpec,
    x: Sequence[TruncatedSeries],
    i: int,
) -> SolveCertificate:
    """Exact x̄ with Σ x̄_j f_j = 0 and x̄ - x ∈ m^{i+1}, f_j the generators of M.

    Solves Σ ε_j f_j = Σ x_j f_j with every ε_j ∈ m^{i+1}; such ε exist as soon as
    the residual lies in m^{i+i0+1}, i0 the Artin–Rees index of M.
    """
    module = _as_module(source)
    ring = module.ring
    x = tuple(x)
    if len(x) != len(module.generators):
        raise PreconditionError(
            f"need {len(module.generators)} approximate values, got {len(x)}"
        )
    if i < 0:
        raise PreconditionError(f"level i must be >= 0, got {i}")
    for xj in x:
        if xj.ring != ring:
            raise IncompatibleRingsError()
    index = coordinate_index(ring, module.arity)
    K = ring.domain
    residual = [ring.zero() for _ in range(module.arity)]
    for xj, gen in zip(x, module.generators):
        residual = [r + xj * e for r, e in zip(residual, gen)]
    input_order = min(r.ord() for r in residual)
    unknowns: list[tuple[int, Exponents]] = []
    columns: list[dict] = []
    for j, gen in enumerate(module.generators):
        low = min(e.ord() for e in gen)
        if not low.exact:
            continue
        for exps in ring.monomials_between(i + 1, ring.trunc - low.value):
            unknowns.append((j, exps))
            columns.append(index.encode([e.shifted(exps) for e in gen]))
    rows: list[dict] = [{} for _ in range(index.size)]
    for c, column in enumerate(columns):
        for r, value in column.items():
            rows[r][c] = value
    target = index.encode(residual)
    rhs = [target.get(r, K.zero) for r in range(index.size)]
    solution = solve_affine(K, rows, rhs, len(unknowns))
    if solution is None:
        ar = artin_rees_index(module)
        raise ApproximationLevelError(
            f"residual of order {input_order} is not in m^{i + 1}·M; "
            f"order {i + ar.i0 + 1} suffices (Artin-Rees index {ar.i0})"
        )
    eps: list[dict] = [{} for _ in x]
    for column, value in solution.particular.items():
        j, exps = unknowns[column]
        eps[j][exps] = value
    output = tuple(xj - TruncatedSeries._raw(ring, e) for xj, e in zip(x, eps))
    final = [ring.zero() for _ in range(module.arity)]
    for xj, gen in zip(output, module.generators):
        final = [r + xj * e for r, e in zip(final, gen)]
    return SolveCertificate(
        method="linear solve for a correction in m^(i+1)",
        level_i=i,
        input=x,
        output=output,
        proximity=[(o - xj).ord() for o, xj in zip(output, x)],
        required=[i + 1] * len(x),
        input_residual_order=input_order,
        residual_order=min(r.ord() for r in final),
        residual_is_zero=not any(final),
    )


# hypotheses of the bound for X^n + f^t X^{n-1} X_1 + ... + f^{nt} X_n + Σ f_l Y_l


@dataclass
class PowerFamilyReport:
    f: TruncatedSeries
    others: tuple[TruncatedSeries, ...]
    n: int
    t: int
    colon_holds: bool
    colon_compared_up_to: int
    colon_excess: list[TruncatedSeries]
    i_I: int
    i_I_certified_up_to: int
    i_Jn: int
    i_Jn_certified_up_to: int
    bound: BoundFunction
    notes: list[str] = field(default_factory=list)


def power_family_check(
    f: TruncatedSeries,
    others: Sequence[TruncatedSeries],
    n: int,
    t: int,
    c: Fraction | int = 0,
    excess_limit: int = 5,
) -> PowerFamilyReport:
    """Checks ((f_l) : f) = (f_l) and measures i_I for I = (f, f_l) and i_Jn for
    J_n = (f^n, f_l), the constants of the bound i + i_I + t·i_Jn + t·n(c+1).

    c, the Rees constant of I, is an input; radicality of I is not checked.
    """
    others = tuple(others)
    ring = _check_rings((f,) + others)
    params = BoundParams(c=c, n=n, t=t)
    f_power = power(f, n)
    if not f_power:
        raise TruncationError(f"f^{n} vanishes modulo m^{ring.trunc + 1}")
    ar_I = artin_rees_index(IdealSpec(ring, (f,) + others))
    ar_J = artin_rees_index(IdealSpec(ring, (f_power,) + others))
    colon = colon_by(IdealSpec(ring, others), f)
    # x·f ∈ (f_l) + m^{D+1} puts x within m^{D+1-i_I} of the exact colon
    level = min(colon.ring.trunc, ring.trunc - ar_I.i0)
    if level < 1:
        raise TruncationError(f"i_I = {ar_I.i0} leaves no room to compare the colon below D = {ring.trunc}")
    small = ring.with_trunc(level)
    base = span_ideal(IdealSpec(small, tuple(g.with_trunc(level) for g in others)))
    excess = []
    for element in colon.basis_series():
        projected = element.with_trunc(level)
        if projected and not member(projected, base):
            excess.append(projected)
    bound = BoundFunction(
        "prop73",
        BoundParams(c=params.c, i_I=ar_I.i0, i_Jn=ar_J.i0, n=n, t=t),
    )
    notes = [
        f"colon compared modulo m^{level + 1}",
        "radicality of (f, f_l) is not checked",
    ]
    if excess:
        notes.append(f"((f_l) : f) is strictly larger than (f_l): {len(excess)} colon basis element(s) fall outside (f_l)")
    logger.info("power family: colon %s, i_I %d, i_Jn %d", "holds" if not excess else "fails", ar_I.i0, ar_J.i0)
    return PowerFamilyReport(
        f=f,
        others=others,
        n=n,
        t=t,
        colon_holds=not excess,
        colon_compared_up_to=level,
        colon_excess=excess[:excess_limit],
        i_I=ar_I.i0,
        i_I_certified_up_to=ar_I.certified_up_to,
        i_Jn=ar_J.i0,
        i_Jn_certified_up_to=ar_J.certified_up_to,
        bound=bound,
        notes=notes,
    )


# stable Artin–Rees


@dataclass(frozen=True)
class StableArCheck:
    x: TruncatedSeries
    nu_x: ExtOrder
    i: int
    exponent: int
    holds: bool


@dataclass
class StableArReport:
    a: Fraction
    b: int
    checks: list[StableArCheck]
    skipped: list[TruncatedSeries]
    infeasible: list[TruncatedSeries]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def stable_ar_scan(
    ideal: IdealSpec,
    xs: Sequence[TruncatedSeries],
    a: Fraction | int | str,
    b: int,
) -> StableArReport:
    """Check ((x)+I) ∩ m^{i+⌈aν(x)⌉+b} ⊆ ((x)+I)·m^i for each x and each feasible i."""
    a = Fraction(a)
    if a < 1 or b < 0:
        raise PreconditionError(f"need a >= 1 and b >= 0, got a={a}, b={b}")
    ring = ideal.ring
    checks = []
    skipped = []
    infeasible = []
    for x in xs:
        if x.ring != ring:
            raise IncompatibleRingsError()
        nu_x = nu(ideal, x)
        if not nu_x.exact:
            skipped.append(x)
            continue
        extended = ideal.extended(x).as_module()
        certified = ring.trunc - extended.max_degree()
        shift = math.ceil(a * nu_x.value) + b
        if shift > certified:
            infeasible.append(x)
            continue
        span = span_module(extended)
        for i in range(0, certified - shift + 1):
            layer = span.filtration(i + shift)
            holds = contains(span_module_times_m_power(extended, i), layer)
            checks.append(StableArCheck(x, nu_x, i, i + shift, holds))
    return StableArReport(a, b, checks, skipped, infeasible)


@dataclass(frozen=True)
class StableArGridRow:
    a: Fraction
    b_min: int | None
    checks: int


def stable_ar_search(
    ideal: IdealSpec,
    xs: Sequence[TruncatedSeries],
    a_grid: Sequence = A_GRID,
    b_max: int | None = None,
) -> list[StableArGridRow]:
    """For every a on the grid, the least b for which every feasible check passes."""
    b_max = ideal.ring.trunc if b_max is None else b_max
    rows = []
    for a in a_grid:
        found = None
        count = 0
        for b in range(b_max + 1):
            report = stable_ar_scan(ideal, xs, a, b)
            if report.checks and report.all_hold:
                found, count = b, len(report.checks)
                break
        rows.append(StableArGridRow(Fraction(a), found, count))
    return rows


# Artin function lower bounds by enumeration


@dataclass(frozen=True)
class PolySystem:
    """Polynomial equations in unknowns X_1..X_n with coefficients in A_D.

    Each equation is a tuple of (exponent vector over the unknowns, coefficient).
    """

    ring: RingSpec
    num_unknowns: int
    equations: tuple[tuple[tuple[Exponents, TruncatedSeries], ...], ...]
    unknown_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.num_unknowns < 1:
            raise PreconditionError("a system needs at least one unknown")
        names = tuple(self.unknown_names) or tuple(
            f"X{k}" for k in range(1, self.num_unknowns + 1)
        )
        object.__setattr__(self, "unknown_names", names)
        eqs = tuple(tuple((tuple(alpha), c) for alpha, c in eq) for eq in self.equations)
        for eq in eqs:
            for alpha, c in eq:
                if len(alpha) != self.num_unknowns:
                    raise PreconditionError("exponent vector does not match the unknowns")
                if c.ring != self.ring:
                    raise IncompatibleRingsError()
        object.__setattr__(self, "equations", eqs)

    @classmethod
    def linear(cls, ring: RingSpec, rows: Sequence[Sequence[TruncatedSeries]]) -> PolySystem:
        """Equations Σ_j rows[e][j]·X_j = 0."""
        n = len(rows[0])
        equations = []
        for row in rows:
            eq = []
            for j, coeff in enumerate(row):
                if coeff:
                    alpha = [0] * n
                    alpha[j] = 1
                    eq.append((tuple(alpha), coeff))
            equations.append(tuple(eq))
        return cls(ring, n, tuple(equations))

    def evaluate(self, xs: Sequence[TruncatedSeries], upto: int | None = None) -> list[TruncatedSeries]:
        values = []
        for eq in self.equations:
            total = self.ring.zero()
            for alpha, coeff in eq:
                term = coeff if upto is None else coeff.truncated(upto)
                for xk, ak in zip(xs, alpha):
                    if ak:
                        term = term.multiply(power(xk, ak, upto), upto)
                total = total + term
            values.append(total)
        return values

    def is_linear(self) -> bool:
        return all(sum(alpha) == 1 for eq in self.equations for alpha, _ in eq)

    def coefficient_module(self) -> ModuleSpec:
        """Columns (coefficient of X_j in each equation) of a linear system."""
        if not self.is_linear():
            raise PreconditionError("coefficient module is defined for linear systems only")
        zero = self.ring.zero()
        columns = []
        for j in range(self.num_unknowns):
            column = []
            for eq in self.equations:
                coeff = zero
                for alpha, c in eq:
                    if alpha[j] == 1:
                        coeff = coeff + c
                column.append(coeff)
            columns.append(tuple(column))
        return ModuleSpec(self.ring, len(self.equations), tuple(columns))

    def jacobian_constants(self, constants: Sequence) -> list[dict[int, object]]:
        """Constant term of ∂f_e/∂X_k at the given constant values, as sparse rows."""
        K = self.ring.domain
        rows = []
        for eq in self.equations:
            row: dict[int, object] = {}
            for alpha, coeff in eq:
                c0 = coeff.constant_term()
                if not c0:
                    continue
                for k, ak in enumerate(alpha):
                    if not ak:
                        continue
                    value = c0 * K(ak)
                    for m, am in enumerate(alpha):
                        for _ in range(am - (1 if m == k else 0)):
                            value = value * constants[m]
                    if value:
                        total = row.get(k, K.zero) + value
                        if total:
                            row[k] = total
                        else:
                            row.pop(k, None)
            rows.append(row)
        return rows


@dataclass
class BetaBound:
    i: int
    beta: int
    nodes_visited: int
    state_space_size: int
    bad_classes: int
    good_classes: int
    note: str


class _ApproximateSolutionSearch:
    """Depth-first walk over approximate solutions, one homogeneous degree per level.

    A node fixes all unknowns modulo m^d and satisfies f ≡ 0 mod m^d. Children of
    degree d that break the equation in degree d are "resolved" with residual order d
    and never expanded.
    """

    def __init__(self, system: PolySystem, i: int, budget: int):
        self.system = system
        self.ring = system.ring
        self.i = i
        self.budget = budget
        K = self.ring.domain
        self.elements = [K(v) for v in range(self.ring.char)]
        self.bad_max = -1
        self.class_max: dict[tuple, int] = {}
        self.good: set[tuple] = set()
        self.visited = 0
        n = system.num_unknowns
        self.state_space = self.ring.char ** (n * self.ring.dimension())

    def _tick(self, count: int = 1) -> None:
        self.visited += count
        if self.visited > self.budget:
            raise BudgetExceededError(self.state_space, self.budget, "artin function enumeration")

    def _record(self, order: int, key) -> None:
        if order <= self.i:
            self.bad_max = max(self.bad_max, order)
        else:
            self.class_max[key] = max(self.class_max.get(key, -1), order)

    def run(self) -> None:
        ring = self.ring
        n = self.system.num_unknowns
        for consts in itertools.product(self.elements, repeat=n):
            self._tick()
            xs = tuple(ring.constant(c) for c in consts)
            key = xs if self.i == 0 else None
            if any(self.system.evaluate(xs, upto=0)):
                self._record(0, key)
                continue
            self._descend(xs, self.system.jacobian_constants(consts), 1, key)

    def _descend(self, xs, jacobian, d: int, key) -> None:
        ring = self.ring
        K = ring.domain
        n = self.system.num_unknowns
        parts = [value.homogeneous_part(d) for value in self.system.evaluate(xs, upto=d)]
        if any(jacobian) or any(parts):
            self._record(d, key)
        monomials = ring.monomials(d)
        solutions = []
        for u in monomials:
            rhs = [-part.coefficient(u) for part in parts]
            solution = solve_affine(K, jacobian, rhs, n)
            if solution is None:
                return
            solutions.append(solution)
        if d == ring.trunc:
            self.good.add(key)
            return
        children = 1
        for solution in solutions:
            children *= solution.size(len(self.elements))
        if self.visited + children > self.budget:
            raise BudgetExceededError(self.state_space, self.budget, "artin function enumeration")
        for choice in itertools.product(*(s.points(K, self.elements) for s in solutions)):
            self._tick()
            new_terms = [dict(x.terms) for x in xs]
            for u, vector in zip(monomials, choice):
                for j, value in enumerate(vector):
                    if value:
                        new_terms[j][u] = value
            child = tuple(TruncatedSeries._raw(ring, t) for t in new_terms)
            child_key = child if d == self.i else key
            self._descend(child, jacobian, d + 1, child_key)

    def beta(self) -> int:
        values = [self.bad_max]
        values.extend(v for k, v in self.class_max.items() if k not in self.good)
        return max(max(values), 0)


def beta_lower_bound_bruteforce(
    system: PolySystem,
    i: int,
    budget: int = DEFAULT_BUDGET,
) -> BetaBound:
    """β_D(i): least β such that f(x) ∈ m^{β+1} forces a solution y ≡ x mod m^{i+1} in A_D.

    Solvability in A_D is weaker than true solvability, so β_D(i) is a lower bound
    for the Artin function at i.
    """
    ring = system.ring
    if ring.char == 0:
        raise PreconditionError("enumeration requires a prime field; pass a prime characteristic")
    if not 0 <= i < ring.trunc:
        raise PreconditionError(f"level i must satisfy 0 <= i < D = {ring.trunc}, got {i}")
    search = _ApproximateSolutionSearch(system, i, budget)
    search.run()
    beta = search.beta()
    bad = sum(1 for k in search.class_max if k not in search.good)
    logger.info("beta_D(%d) = %d after %d nodes", i, beta, search.visited)
    return BetaBound(
        i=i,
        beta=beta,
        nodes_visited=search.visited,
        state_space_size=search.state_space,
        bad_classes=bad,
        good_classes=len(search.good),
        note=f"beta_D({i}) <= beta({i}): solvability modulo m^{ring.trunc + 1} is weaker than exact solvability",
    )
