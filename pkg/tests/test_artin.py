import random

import pytest

from algebra.artin import (
    PolySystem,
    artin_rees_index,
    beta_lower_bound_bruteforce,
    divide_by_leading_power,
    power_family_check,
    solve_fx_hy,
    solve_linear_artin_rees,
    solve_linear_regular,
    stable_ar_scan,
    stable_ar_search,
)
from algebra.errors import (
    ApproximationLevelError,
    BudgetExceededError,
    CertifiedRangeError,
    NonRegularError,
    PreconditionError,
    TruncationError,
)
from algebra.series import RingSpec, random_series
from algebra.subspace import (
    IdealSpec,
    contains,
    span_m_power,
    span_module,
    span_module_times_m_power,
    subspace_intersect,
)
from lab.parse import parse_ideal, parse_module, parse_system


def _sweep_holds(module, i0, up_to):
    """Independent check: M ∩ m^i ⊆ m^{max(i-i0,0)}·M for i = 0..up_to."""
    ring = module.ring
    span = span_module(module)
    for i in range(up_to + 1):
        meet = subspace_intersect(span, span_m_power(ring, i, module.arity))
        if not contains(span_module_times_m_power(module, max(i - i0, 0)), meet):
            return False
    return True


@pytest.mark.parametrize(
    "text, expected, certified",
    [("T1", 1, 7), ("T1^2", 2, 6)],
)
def test_artin_rees_index_of_ideals(text, expected, certified):
    ring = RingSpec(2, 0, 8)
    ideal = parse_ideal(text, ring)
    result = artin_rees_index(ideal)
    assert result.i0 == expected
    assert result.certified_up_to == certified
    assert _sweep_holds(ideal.as_module(), expected, certified)
    assert not _sweep_holds(ideal.as_module(), expected - 1, certified)
    level, element = result.tight_witness
    assert 0 <= level <= certified


def test_artin_rees_index_of_module():
    ring = RingSpec(2, 0, 8)
    module = parse_module("(T1,0);(0,T2)", ring)
    result = artin_rees_index(module)
    assert result.i0 == 1
    assert result.certified_up_to == 7
    assert _sweep_holds(module, 1, 7)
    assert not _sweep_holds(module, 0, 7)


def test_artin_rees_index_of_zero_ideal():
    ring = RingSpec(2, 0, 5)
    result = artin_rees_index(IdealSpec.zero(ring))
    assert result.i0 == 0
    assert result.tight_witness is None


def test_artin_rees_index_range():
    ring = RingSpec(2, 0, 8)
    ideal = parse_ideal("T1", ring)
    assert artin_rees_index(ideal, up_to=3).certified_up_to == 3
    with pytest.raises(CertifiedRangeError):
        artin_rees_index(ideal, up_to=8)
    with pytest.raises(CertifiedRangeError):
        artin_rees_index(ideal, up_to=-1)


def test_solve_linear_regular_examples(poly):
    ring = RingSpec(2, 0, 8)
    f = (poly(ring, "T1"), poly(ring, "T2^2"))
    certificate = solve_linear_regular(f, (poly(ring, "T2^2"), poly(ring, "-T1 + T1^5")), 3)
    assert certificate.output == (poly(ring, "T2^2"), poly(ring, "-T1"))
    assert certificate.residual_is_zero
    assert certificate.verified
    assert certificate.regularity == "verified"
    assert certificate.required == [5, 4]

    certificate = solve_linear_regular(f, (poly(ring, "T1^4"), poly(ring, "T2^3")), 2)
    assert certificate.output == (ring.zero(), ring.zero())

    exact = (poly(ring, "T2^2*(1 + T1)"), poly(ring, "-T1*(1 + T1)"))
    certificate = solve_linear_regular(f, exact, 3)
    assert certificate.output == exact
    assert certificate.input_residual_order == certificate.residual_order


def test_solve_linear_regular_preconditions(poly):
    ring = RingSpec(2, 0, 8)
    f = (poly(ring, "T1"), poly(ring, "T2^2"))
    with pytest.raises(ApproximationLevelError, match="approximation level insufficient"):
        solve_linear_regular(f, (poly(ring, "T2^2"), poly(ring, "-T1 + T1^3")), 3)
    with pytest.raises(PreconditionError):
        solve_linear_regular(tuple(reversed(f)), (ring.zero(), ring.zero()), 1)
    with pytest.raises(CertifiedRangeError):
        solve_linear_regular(f, (ring.zero(), ring.zero()), 7)
    skew = (poly(ring, "T1"), poly(ring, "T1 + T2"))
    with pytest.raises(NonRegularError, match="non-regular initial forms detected"):
        solve_linear_regular(skew, (ring.zero(), ring.zero()), 1)


def test_solve_linear_regular_with_asserted_regularity(poly):
    ring = RingSpec(2, 0, 8)
    f = (poly(ring, "T1 + T2"), poly(ring, "T1 - T2"))
    x = (poly(ring, "T1 - T2 + T1^4"), poly(ring, "-T1 - T2"))
    certificate = solve_linear_regular(f, x, 2, assume_regular=True)
    assert certificate.regularity == "asserted"
    assert certificate.verified


def _regular_instance(rng: random.Random, ring: RingSpec):
    orders = sorted(rng.choice((1, 2)) for _ in range(rng.choice((2, 3))))
    f = []
    for j, o in enumerate(orders):
        exps = [0] * ring.num_vars
        exps[j] = o
        f.append(ring.monomial(tuple(exps)) + random_series(ring, rng, o + 1, o + 2, density=0.3))
    i = rng.randint(0, 2)
    bound = i + orders[-1] + 1
    x = [ring.zero() for _ in f]
    for k in range(len(f)):
        for j in range(k + 1, len(f)):
            z = random_series(ring, rng, 0, 2, density=0.4)
            x[j] = x[j] - f[k] * z
            x[k] = x[k] + f[j] * z
    x = [xj + random_series(ring, rng, bound - o, bound - o + 1, density=0.4) for xj, o in zip(x, orders)]
    return f, x, i


@pytest.mark.slow
def test_solve_linear_regular_seeded_suite():
    ring = RingSpec(3, 0, 7)
    for seed in range(100):
        rng = random.Random(seed)
        f, x, i = _regular_instance(rng, ring)
        certificate = solve_linear_regular(f, x, i)
        assert certificate.residual_is_zero, seed
        assert certificate.verified, seed


def test_solve_fx_hy_examples(poly):
    ring = RingSpec(2, 0, 8)
    f = poly(ring, "T1^2 + T2^3")
    h = poly(ring, "T1")
    certificate = solve_fx_hy(2, f, h, poly(ring, "T1 + T1^4"), -f, 3)
    assert certificate.output == (poly(ring, "T1"), -f)
    assert certificate.residual_is_zero and certificate.verified

    certificate = solve_fx_hy(2, f, h, ring.zero(), ring.zero(), 3)
    assert certificate.output == (ring.zero(), ring.zero())

    z = poly(ring, "T2 + T1*T2")
    certificate = solve_fx_hy(2, f, h, h * z, -(f * z), 3)
    assert (certificate.output[0] - h * z).ord() >= 4
    assert (certificate.output[1] + f * z).ord() >= 4


def test_solve_fx_hy_preconditions(poly):
    ring = RingSpec(2, 0, 8)
    h = poly(ring, "T1")
    with pytest.raises(PreconditionError):
        solve_fx_hy(2, poly(ring, "T1^2 + T2^4"), h, ring.zero(), ring.zero(), 1)
    with pytest.raises(PreconditionError):
        solve_fx_hy(2, poly(ring, "T1^2 + T1^3"), h, ring.zero(), ring.zero(), 1)
    f = poly(ring, "T1^2 + T2^3")
    with pytest.raises(ApproximationLevelError):
        solve_fx_hy(2, f, h, poly(ring, "T1 + T1^3"), -f, 3)


def test_divide_by_leading_power(poly):
    ring = RingSpec(2, 0, 8)
    f = poly(ring, "T1^2 + T2^3")
    h = poly(ring, "T1^3 + T2")
    quotient, rest = divide_by_leading_power(h, f, 2)
    assert h == quotient * f + rest
    assert all(e[0] < 2 for e in rest.terms)


@pytest.mark.slow
def test_solve_fx_hy_seeded_suite():
    ring = RingSpec(3, 0, 7)
    i = 2
    for seed in range(100):
        rng = random.Random(seed)
        k = rng.choice((1, 2))
        lead = ring.monomial((k, 0, 0))
        g = ring.monomial((0, k + 1, 0)) + random_series(ring, rng, k + 2, k + 3, density=0.3)
        f = lead + g
        h = ring.monomial((0, 0, 1), rng.randint(1, 3)) + ring.monomial((0, 1, 0), rng.randint(0, 1))
        h = h + _drop_t1(random_series(ring, rng, 2, 3, density=0.3))
        z = random_series(ring, rng, 0, 2, density=0.5)
        x = h * z + random_series(ring, rng, 5, 6, density=0.3)
        y = -(f * z) + random_series(ring, rng, 5, 6, density=0.3)
        certificate = solve_fx_hy(k, f, h, x, y, i)
        assert certificate.residual_is_zero, seed
        assert certificate.verified, seed


def _drop_t1(series):
    return series.ring.series({e: c for e, c in series.terms.items() if e[0] == 0})


def test_solve_linear_artin_rees(poly):
    ring = RingSpec(2, 0, 8)
    ideal = parse_ideal("T1", ring)
    certificate = solve_linear_artin_rees(ideal, (poly(ring, "T1^3"),), 1)
    assert certificate.residual_is_zero
    assert certificate.verified
    with pytest.raises(ApproximationLevelError):
        solve_linear_artin_rees(ideal, (poly(ring, "T2"),), 1)


def test_solve_linear_artin_rees_on_module(poly):
    ring = RingSpec(2, 0, 8)
    module = parse_module("(T1, T2); (T2, -T1)", ring)
    x = (poly(ring, "T1^4"), poly(ring, "T2^4"))
    certificate = solve_linear_artin_rees(module, x, 2)
    assert certificate.residual_is_zero
    assert all(p >= 3 for p in certificate.proximity)


def test_stable_artin_rees_for_zero_ideal(poly):
    ring = RingSpec(2, 0, 8)
    xs = [poly(ring, "T1"), poly(ring, "T1 + T2^2"), poly(ring, "T1*T2")]
    report = stable_ar_scan(IdealSpec.zero(ring), xs, 1, 0)
    assert report.checks
    assert report.all_hold
    rows = stable_ar_search(IdealSpec.zero(ring), xs[:1], a_grid=("1",), b_max=2)
    assert rows[0].b_min == 0


def test_stable_artin_rees_skips_members(poly):
    ring = RingSpec(2, 0, 6)
    ideal = parse_ideal("T1", ring)
    report = stable_ar_scan(ideal, [poly(ring, "T1^2")], 1, 0)
    assert report.skipped == [poly(ring, "T1^2")]
    assert not report.checks


def test_beta_for_linear_unknown():
    ring = RingSpec(2, 2, 5)
    system = parse_system("X1", ring)
    for i in range(4):
        assert beta_lower_bound_bruteforce(system, i).beta == i


def test_beta_for_t1_x1_matches_artin_rees():
    ring = RingSpec(2, 2, 5)
    system = parse_system("T1*X1", ring)
    i0 = artin_rees_index(system.coefficient_module()).i0
    for i in range(4):
        bound = beta_lower_bound_bruteforce(system, i)
        assert bound.beta == i + 1 == i + i0
        assert bound.nodes_visited > 0


def test_beta_for_quadratic_system():
    ring = RingSpec(3, 2, 2)
    system = parse_system("X1*X2 - (T1*T2 - T3^2)*X3", ring)
    assert not system.is_linear()
    assert beta_lower_bound_bruteforce(system, 1).beta >= 1


def test_beta_preconditions_and_budget():
    ring = RingSpec(2, 0, 5)
    with pytest.raises(PreconditionError):
        beta_lower_bound_bruteforce(parse_system("X1", ring), 1)
    ring = RingSpec(2, 2, 5)
    with pytest.raises(PreconditionError):
        beta_lower_bound_bruteforce(parse_system("X1", ring), 5)
    with pytest.raises(BudgetExceededError) as info:
        beta_lower_bound_bruteforce(parse_system("T1*X1", ring), 2, budget=5)
    assert info.value.state_space_size == 2 ** ring.dimension()


def test_poly_system_linear_constructor(poly):
    ring = RingSpec(2, 0, 4)
    system = PolySystem.linear(ring, [[poly(ring, "T1"), poly(ring, "T2")]])
    assert system.is_linear()
    assert system.num_unknowns == 2
    assert system.evaluate([poly(ring, "T2"), poly(ring, "-T1")]) == [ring.zero()]


def test_power_family_on_a_regular_pair(poly):
    ring = RingSpec(3, 0, 8)
    f, q = poly(ring, "T1"), poly(ring, "T2^2 + T3^2")
    report = power_family_check(f, [q], n=1, t=1)
    assert report.colon_holds
    assert report.colon_excess == []
    assert report.colon_compared_up_to == 6
    assert (report.i_I, report.i_Jn) == (2, 2)
    assert report.i_I_certified_up_to == 6
    assert report.bound.evaluate(4) == 9
    assert report.notes == ["colon compared modulo m^7", "radicality of (f, f_l) is not checked"]

    cubed = power_family_check(f, [q], n=3, t=1)
    assert cubed.i_Jn == 3
    assert cubed.i_Jn_certified_up_to == 5
    assert cubed.bound.evaluate(0) == 0 + 2 + 3 + 3


def test_power_family_colon_at_a_cusp(poly):
    ring = RingSpec(2, 0, 8)
    report = power_family_check(poly(ring, "T1"), [poly(ring, "T1^2 - T2^3")], n=1, t=1)
    assert report.i_I == 3
    assert report.colon_compared_up_to == 5
    assert report.colon_holds


def test_power_family_reports_a_larger_colon(poly):
    ring = RingSpec(2, 0, 8)
    report = power_family_check(poly(ring, "T1"), [poly(ring, "T1*T2")], n=1, t=1)
    assert not report.colon_holds
    assert report.colon_compared_up_to == 7
    assert report.colon_excess[0] == poly(ring.with_trunc(7), "T2")
    assert len(report.colon_excess) == 5
    assert report.notes[-1].startswith("((f_l) : f) is strictly larger than (f_l): 7 colon basis")


def test_power_family_preconditions(poly):
    ring = RingSpec(2, 0, 8)
    with pytest.raises(TruncationError, match="vanishes"):
        power_family_check(poly(ring, "T1"), [poly(ring, "T2^2")], n=9, t=1)
    with pytest.raises(PreconditionError):
        power_family_check(poly(ring, "T1"), [poly(RingSpec(2, 0, 6), "T2^2")], n=1, t=1)
