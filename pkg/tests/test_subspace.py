import pytest

from algebra.errors import IncompatibleRingsError, PreconditionError, TruncationError
from algebra.series import ExtOrder, RingSpec
from algebra.subspace import (
    IdealSpec,
    ModuleSpec,
    Subspace,
    colon_by,
    contains,
    distance_order,
    member,
    solve_affine,
    span_ideal,
    span_m_power,
    span_module,
    span_module_times_m_power,
    subspace_intersect,
    subspace_sum,
)
from lab.parse import parse_ideal, parse_module


def test_span_ideal_dimensions(poly):
    ring = RingSpec(2, 0, 2)
    assert span_ideal(parse_ideal("T1", ring)).dim == 3
    assert span_ideal(parse_ideal("T1, T2", RingSpec(2, 0, 1))).dim == 2


def test_span_ideal_rank_matches_direct_count(poly):
    # (T1^2 - T2^3) in degree <= 5: multiples by the 6 monomials of degree <= 2 stay
    # independent, the ones of degree 3 lose their T2^3 tail but keep T1^2*u
    ring = RingSpec(2, 0, 5)
    span = span_ideal(parse_ideal("T1^2 - T2^3", ring))
    assert span.dim == 10


def test_zero_ideal_is_zero_subspace():
    ring = RingSpec(2, 0, 3)
    assert span_ideal(IdealSpec.zero(ring)) == Subspace.zero(ring)
    assert span_ideal(parse_ideal("0", ring)).dim == 0


def test_span_module_dimensions():
    ring = RingSpec(2, 0, 1)
    assert span_module(parse_module("(T1,0);(0,T2)", ring)).dim == 2
    assert span_module(parse_module("(T1,T1)", ring)).dim == 1
    assert span_module(parse_module("(T1,0);(T2,0);(0,T1);(0,T2)", ring)).dim == 4


def test_span_m_power():
    ring = RingSpec(2, 0, 3)
    assert span_m_power(ring, 2).dim == 7
    assert span_m_power(ring, 0).dim == ring.dimension()
    assert span_m_power(ring, 4).dim == 0
    with pytest.raises(PreconditionError):
        span_m_power(ring, 5)


def test_intersection_with_power_of_m():
    ring = RingSpec(2, 0, 3)
    meet = subspace_intersect(span_ideal(parse_ideal("T1", ring)), span_m_power(ring, 2))
    expected = span_ideal(parse_ideal("T1^2, T1*T2", ring))
    assert meet == expected
    assert meet.dim == 5


@pytest.mark.parametrize(
    "left, right",
    [("T1", "T2"), ("T1^2 - T2^3", "T1*T2"), ("T1, T2^2", "T1 + T2")],
)
def test_dimension_formula(left, right):
    ring = RingSpec(2, 0, 5)
    U = span_ideal(parse_ideal(left, ring))
    V = span_ideal(parse_ideal(right, ring))
    assert subspace_sum(U, V).dim + subspace_intersect(U, V).dim == U.dim + V.dim
    assert subspace_sum(U, U) == U
    assert subspace_intersect(U, U) == U
    assert contains(subspace_sum(U, V), V)
    assert contains(U, subspace_intersect(U, V))


def test_distance_order_examples(poly):
    ring = RingSpec(2, 0, 6)
    span = span_ideal(parse_ideal("T1^2 - T2^3", ring))
    assert distance_order(poly(ring, "T1"), span) == 1
    assert distance_order(poly(ring, "T1^2"), span) == 3
    assert distance_order(poly(ring, "T1^2 - T2^3"), span) == ExtOrder.at_least(7)
    assert member(poly(ring, "T2*(T1^2 - T2^3)"), span)


def test_distance_order_grows_when_the_subspace_grows(poly):
    ring = RingSpec(2, 0, 6)
    x = poly(ring, "T1^2 + T1*T2^2")
    small = span_ideal(parse_ideal("T1^2 - T2^3", ring))
    large = span_ideal(parse_ideal("T1^2 - T2^3, T1*T2", ring))
    assert distance_order(x, small) <= distance_order(x, large)


def test_filtration_reads_off_intersection():
    ring = RingSpec(2, 0, 5)
    span = span_ideal(parse_ideal("T1 + T2^2", ring))
    for e in range(ring.trunc + 2):
        assert span.filtration(e) == subspace_intersect(span, span_m_power(ring, e))


def test_module_times_power_of_m():
    ring = RingSpec(2, 0, 4)
    module = parse_ideal("T1", ring).as_module()
    assert span_module_times_m_power(module, 2) == span_ideal(parse_ideal("T1^3, T1^2*T2, T1*T2^2", ring))


def test_arity_and_ring_mismatch():
    ring = RingSpec(2, 0, 3)
    with pytest.raises(PreconditionError):
        subspace_sum(span_m_power(ring, 1, 1), span_m_power(ring, 1, 2))
    with pytest.raises(IncompatibleRingsError):
        contains(span_m_power(ring, 1), span_m_power(RingSpec(2, 0, 4), 1))
    with pytest.raises(PreconditionError):
        ModuleSpec(ring, 2, ((ring.one(),),))


def test_solve_affine():
    K = RingSpec(1).domain
    # x0 + x1 = 3, x1 = 1
    solution = solve_affine(K, [{0: K(1), 1: K(1)}, {1: K(1)}], [K(3), K(1)], 3)
    assert solution.dense_particular(K) == [K(2), K(1), K(0)]
    assert len(solution.kernel) == 1
    assert solve_affine(K, [{0: K(1)}, {0: K(1)}], [K(1), K(2)], 1) is None


def test_colon_by_a_regular_element(poly):
    ring = RingSpec(3, 0, 6)
    colon = colon_by(parse_ideal("T2^2 + T3^2", ring), poly(ring, "T1"))
    assert colon.ring == ring.with_trunc(5)
    assert colon == span_ideal(parse_ideal("T2^2 + T3^2", ring.with_trunc(5)))


def test_colon_by_a_zero_divisor(poly):
    ring = RingSpec(2, 0, 6)
    colon = colon_by(parse_ideal("T1*T2", ring), poly(ring, "T1"))
    small = ring.with_trunc(5)
    assert colon == span_ideal(parse_ideal("T2", small))
    assert colon_by(IdealSpec.zero(ring), poly(ring, "T1 + T2^2")).dim == 0
    assert colon_by(parse_ideal("T1^2", ring), poly(ring, "T1")) == span_ideal(parse_ideal("T1", small))


def test_colon_at_truncation_picks_up_cutoff_elements(poly):
    ring = RingSpec(2, 0, 8)
    colon = colon_by(parse_ideal("T1^2 - T2^3", ring), poly(ring, "T1"))
    small = ring.with_trunc(7)
    extra = poly(small, "T1*T2^6")
    # T1 * T1*T2^6 = (T1^2 - T2^3)*T2^6 + T2^9
    assert member(extra, colon)
    assert not member(extra, span_ideal(parse_ideal("T1^2 - T2^3", small)))


def test_colon_preconditions(poly):
    ring = RingSpec(2, 0, 3)
    with pytest.raises(PreconditionError):
        colon_by(parse_ideal("T1", ring), ring.zero())
    with pytest.raises(TruncationError, match="no room"):
        colon_by(parse_ideal("T1", ring), poly(ring, "T2^3"))
