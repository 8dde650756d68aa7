import random
from fractions import Fraction

import pytest

from algebra.errors import BudgetExceededError, PreconditionError
from algebra.orders import (
    UNBOUNDED,
    Sampling,
    icl_envelope,
    icl_scan,
    nu,
    nu_bar_estimate,
    superadditivity_holds,
    valuation_check,
)
from algebra.series import ExtOrder, RingSpec, random_series
from algebra.subspace import IdealSpec
from lab.parse import parse_ideal

MONOMIALS_ONLY = Sampling(count=0)


def test_nu_examples(poly):
    ring = RingSpec(2, 0, 6)
    ideal = parse_ideal("T1^2 - T2^3", ring)
    assert nu(ideal, poly(ring, "T1")) == 1
    assert nu(ideal, poly(ring, "T1^2")) == 3
    assert nu(ideal, poly(ring, "T2*(T1^2 - T2^3)")) == ExtOrder.at_least(7)
    x = poly(ring, "T1^2 + T2")
    assert nu(IdealSpec.zero(ring), x) == x.ord()


def test_rees_estimate(poly):
    ring = RingSpec(2, 0, 12)
    ideal = parse_ideal("T1^2 - T2^3", ring)
    estimate = nu_bar_estimate(ideal, poly(ring, "T1"), 4)
    assert estimate.estimate == Fraction(3, 2)
    assert [s.order for s in estimate.samples] == [1, 3, 4, 6]
    assert estimate.nu_x == 1
    assert not estimate.truncation_limited


def test_rees_estimate_for_zero_ideal(poly):
    ring = RingSpec(2, 0, 8)
    estimate = nu_bar_estimate(IdealSpec.zero(ring), poly(ring, "T1"), 3)
    assert estimate.estimate == 1


def test_rees_estimate_flags_truncation(poly):
    ring = RingSpec(2, 0, 4)
    estimate = nu_bar_estimate(parse_ideal("T1^2 - T2^3", ring), poly(ring, "T1"), 4)
    assert estimate.truncation_limited
    assert estimate.samples[-1].ratio is None


def test_rees_estimate_preconditions(poly):
    ring = RingSpec(2, 0, 6)
    ideal = parse_ideal("T1", ring)
    with pytest.raises(PreconditionError):
        nu_bar_estimate(ideal, ring.zero(), 2)
    with pytest.raises(PreconditionError):
        nu_bar_estimate(ideal, poly(ring, "T2"), 0)


def test_rees_estimate_is_monotone_in_n_max(poly):
    ring = RingSpec(2, 0, 12)
    ideal = parse_ideal("T1^2 - T2^3", ring)
    x = poly(ring, "T1 + T2^2")
    values = [nu_bar_estimate(ideal, x, n).estimate for n in range(1, 5)]
    assert values == sorted(values)
    assert values[0] == nu(ideal, x).value


@pytest.mark.parametrize("num_vars", [2, 3])
def test_icl_scan_cusp(num_vars):
    ring = RingSpec(num_vars, 0, 8)
    report = icl_scan(parse_ideal("T1^2 + T2^3", ring), 3, 1, MONOMIALS_ONLY)
    assert report.b_min == 1
    t1 = ring.variable(0)
    assert any(p.g == t1 and p.h == t1 for p in report.attaining_pairs)
    for pair in report.attaining_pairs:
        assert pair.nu_gh.value == pair.nu_g.value + pair.nu_h.value + 1
    assert not report.violations


def test_icl_scan_valuation_ideal():
    ring = RingSpec(3, 0, 8)
    report = icl_scan(parse_ideal("T1^2 + T2^2 + T3^2", ring), 3, 1, Sampling())
    assert report.b_min == 0
    assert report.pairs_scanned > 0


def test_icl_scan_reports_violation():
    ring = RingSpec(2, 0, 8)
    report = icl_scan(parse_ideal("T1*T2", ring), 2, 1, MONOMIALS_ONLY)
    assert report.b_min == UNBOUNDED
    t1, t2 = ring.variable(0), ring.variable(1)
    assert any({p.g, p.h} == {t1, t2} for p in report.violations)


def test_truncation_hiding_a_violation_is_noted():
    ideal = parse_ideal("T1*T2", RingSpec(2, 0, 3))
    report = icl_scan(ideal, 1, 2, MONOMIALS_ONLY)
    assert report.b_min == 0
    assert not report.violations
    assert report.hidden_by_truncation == 1
    assert "1 pair(s) with gh in I + m^4 are not counted as violations" in report.certified_note
    assert report.certified_note.endswith("needs D >= 4")
    deeper = icl_scan(parse_ideal("T1*T2", RingSpec(2, 0, 4)), 1, 2, MONOMIALS_ONLY)
    assert deeper.b_min == UNBOUNDED
    assert deeper.hidden_by_truncation == 0


def test_icl_scan_with_random_samples_is_seeded():
    ring = RingSpec(2, 0, 8)
    ideal = parse_ideal("T1^2 + T2^3", ring)
    first = icl_scan(ideal, 3, 1, Sampling(count=5, seed=11))
    second = icl_scan(ideal, 3, 1, Sampling(count=5, seed=11))
    assert first.pairs_scanned == second.pairs_scanned
    assert first.b_min == second.b_min
    assert first.attaining_pairs == second.attaining_pairs


def test_b_min_monotone_in_scan_degree():
    ring = RingSpec(2, 0, 8)
    ideal = parse_ideal("T1^2 + T2^3", ring)
    low = icl_scan(ideal, 2, 1, MONOMIALS_ONLY)
    high = icl_scan(ideal, 3, 1, MONOMIALS_ONLY)
    assert low.b_min <= high.b_min


def test_icl_scan_degree_must_fit_truncation():
    ring = RingSpec(2, 0, 5)
    with pytest.raises(PreconditionError):
        icl_scan(parse_ideal("T1", ring), 3)
    with pytest.raises(PreconditionError):
        icl_scan(parse_ideal("T1", ring), 2, a="1/2")


def test_exhaustive_sampling_needs_prime_field_and_budget():
    ideal = parse_ideal("T1^2 + T2^3", RingSpec(2, 0, 4))
    with pytest.raises(PreconditionError):
        icl_scan(ideal, 2, 1, Sampling(mode="exhaustive"))
    ideal = parse_ideal("T1^2 + T2^3", RingSpec(2, 3, 4))
    with pytest.raises(BudgetExceededError):
        icl_scan(ideal, 2, 1, Sampling(mode="exhaustive", budget=100))


def test_exhaustive_scan_over_gf2():
    ring = RingSpec(2, 2, 4)
    report = icl_scan(parse_ideal("T1^2 + T2^3", ring), 1, 1, Sampling(mode="exhaustive"))
    # elements of degree <= 1: T1, T2, T1 + T2
    assert report.pairs_scanned == 6


def test_icl_envelope():
    ring = RingSpec(2, 0, 8)
    result = icl_envelope(parse_ideal("T1^2 + T2^3", ring), 3, MONOMIALS_ONLY)
    assert [r.b_min for r in result.reports] == [1, 0, 0]
    assert result.envelope == [(Fraction(1), 1), (Fraction(3, 2), 0)]


def test_valuation_check():
    ring3 = RingSpec(3, 0, 8)
    assert valuation_check(parse_ideal("T1^2 + T2^2 + T3^2", ring3), 3, Sampling()).holds
    ring2 = RingSpec(2, 0, 8)
    check = valuation_check(parse_ideal("T1^2 - T2^3", ring2), 3, MONOMIALS_ONLY)
    assert not check.holds
    t1 = ring2.variable(0)
    assert check.counterexample.g == t1 and check.counterexample.h == t1
    assert valuation_check(IdealSpec.zero(ring2), 3, MONOMIALS_ONLY).holds


def test_superadditivity_on_random_elements():
    ring = RingSpec(2, 0, 8)
    ideal = parse_ideal("T1^2 - T2^3, T1*T2^2", ring)
    rng = random.Random(5)
    for _ in range(25):
        g = random_series(ring, rng, 1, 3)
        h = random_series(ring, rng, 1, 3)
        assert superadditivity_holds(ideal, g, h)


def test_nu_is_at_least_order():
    ring = RingSpec(2, 0, 6)
    ideal = parse_ideal("T1^2 - T2^3", ring)
    rng = random.Random(2)
    for _ in range(20):
        x = random_series(ring, rng, 0, 4)
        assert nu(ideal, x) >= x.ord()
