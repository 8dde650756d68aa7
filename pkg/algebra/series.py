"""Exact arithmetic in k[T1..TN]/m^{D+1} with k = QQ or GF(p).

Coefficients live in sympy's exact domains; a series is an immutable sparse map
from exponent tuples to nonzero domain elements of total degree at most D.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from sympy import isprime
from sympy.polys.domains import GF, QQ

from algebra.errors import IncompatibleRingsError, PreconditionError

logger = logging.getLogger(__name__)

Exponents = tuple[int, ...]

MAX_CHARACTERISTIC = 2**31


@lru_cache(maxsize=None)
def scalar_domain(char: int):
    if char == 0:
        return QQ
    return GF(char, symmetric=False)


@lru_cache(maxsize=None)
def monomials_of_degree(num_vars: int, degree: int) -> tuple[Exponents, ...]:
    """All exponent vectors of total degree `degree`, graded-lex descending."""
    if degree < 0:
        return ()
    if num_vars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(num_vars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def monomial_sort_key(exps: Exponents) -> tuple:
    return (sum(exps), tuple(-e for e in exps))


class ExtOrder:
    """An order value: Exact(n), or AtLeast(b) meaning "b or more, possibly infinite"."""

    __slots__ = ("value", "exact")

    def __init__(self, value: int, exact: bool = True):
        self.value = int(value)
        self.exact = bool(exact)

    @classmethod
    def at_least(cls, bound: int) -> ExtOrder:
        return cls(bound, exact=False)

    def _key(self) -> tuple[int, int]:
        return (self.value, 0 if self.exact else 1)

    @staticmethod
    def _lift(other) -> ExtOrder | None:
        if isinstance(other, ExtOrder):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return ExtOrder(other)
        return None

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self.value) if self.exact else hash(("at_least", self.value))

    def __lt__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._key() < other._key()

    def __le__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._key() <= other._key()

    def __gt__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._key() > other._key()

    def __ge__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._key() >= other._key()

    def __add__(self, other) -> ExtOrder:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not self.exact:
            return self
        if not other.exact:
            return other
        return ExtOrder(self.value + other.value)

    __radd__ = __add__

    def to_json(self) -> int | str:
        return self.value if self.exact else f">={self.value}"

    def __str__(self) -> str:
        return str(self.to_json())

    def __repr__(self) -> str:
        return f"Exact({self.value})" if self.exact else f"AtLeast({self.value})"


@dataclass(frozen=True)
class RingSpec:
    """The ambient algebra: N variables, characteristic (0 for QQ) and truncation D."""

    num_vars: int
    char: int = 0
    trunc: int = 8
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.num_vars < 1:
            raise PreconditionError(f"num_vars must be >= 1, got {self.num_vars}")
        if self.trunc < 1:
            raise PreconditionError(f"truncation order must be >= 1, got {self.trunc}")
        if self.char != 0 and (self.char >= MAX_CHARACTERISTIC or not isprime(self.char)):
            raise PreconditionError(
                f"characteristic must be 0 or a prime below 2^31, got {self.char}"
            )
        names = tuple(self.names) or tuple(f"T{k}" for k in range(1, self.num_vars + 1))
        if len(names) != self.num_vars:
            raise PreconditionError(
                f"expected {self.num_vars} variable names, got {len(names)}"
            )
        if len(set(names)) != len(names):
            raise PreconditionError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)

    @classmethod
    def from_names(cls, names: Iterable[str], char: int = 0, trunc: int = 8) -> RingSpec:
        names = tuple(names)
        return cls(len(names), char, trunc, names)

    @property
    def domain(self):
        return scalar_domain(self.char)

    @property
    def field_label(self) -> str:
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def with_trunc(self, trunc: int) -> RingSpec:
        return replace(self, trunc=trunc)

    def monomials(self, degree: int) -> tuple[Exponents, ...]:
        return monomials_of_degree(self.num_vars, degree)

    def monomials_between(self, low: int, high: int) -> Iterator[Exponents]:
        for d in range(max(low, 0), min(high, self.trunc) + 1):
            yield from self.monomials(d)

    def dimension(self) -> int:
        """Dimension of the truncated algebra as a vector space."""
        return sum(len(self.monomials(d)) for d in range(self.trunc + 1))

    def scalar(self, value):
        K = self.domain
        if K.of_type(value):
            return value
        if isinstance(value, Fraction):
            den = K(value.denominator)
            if not den:
                raise PreconditionError(
                    f"denominator {value.denominator} vanishes in characteristic {self.char}"
                )
            return K.quo(K(value.numerator), den)
        return K(int(value))

    def zero(self) -> TruncatedSeries:
        return TruncatedSeries._raw(self, {})

    def one(self) -> TruncatedSeries:
        return self.constant(1)

    def constant(self, value) -> TruncatedSeries:
        return TruncatedSeries(self, {(0,) * self.num_vars: value})

    def variable(self, which: int | str) -> TruncatedSeries:
        """The variable with the given 0-based index or name."""
        index = self.names.index(which) if isinstance(which, str) else which
        exps = [0] * self.num_vars
        exps[index] = 1
        return self.monomial(tuple(exps))

    def monomial(self, exps: Exponents, coeff=1) -> TruncatedSeries:
        return TruncatedSeries(self, {tuple(exps): coeff})

    def series(self, terms: Mapping[Exponents, object]) -> TruncatedSeries:
        return TruncatedSeries(self, terms)

    def to_dict(self) -> dict:
        return {"vars": list(self.names), "char": self.char, "trunc": self.trunc}


def scalar_to_fraction(ring: RingSpec, value) -> Fraction:
    rational = ring.domain.to_sympy(value)
    return Fraction(int(rational.p), int(rational.q))


def scalar_to_str(ring: RingSpec, value) -> str:
    return str(ring.domain.to_sympy(value))


def _check_same_ring(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.ring != b.ring:
        raise IncompatibleRingsError()


def _multiply_terms(a: dict, b: dict, limit: int) -> dict:
    out: dict = {}
    b_items = [(e, c, sum(e)) for e, c in b.items()]
    for ea, ca in a.items():
        da = sum(ea)
        if da > limit:
            continue
        for eb, cb, db in b_items:
            if da + db > limit:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            prod = ca * cb
            current = out.get(e)
            out[e] = prod if current is None else current + prod
    return {e: c for e, c in out.items() if c}


class TruncatedSeries:
    """An immutable element of the truncated algebra."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping[Exponents, object] | None = None):
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != ring.num_vars or any(e < 0 for e in exps):
                raise PreconditionError(
                    f"invalid exponent vector {exps} for {ring.num_vars} variables"
                )
            if sum(exps) > ring.trunc:
                continue
            c = ring.scalar(coeff)
            if c:
                clean[exps] = c
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: RingSpec, terms: dict) -> TruncatedSeries:
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self) -> Mapping[Exponents, object]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Exponents, object]]:
        return sorted(self._terms.items(), key=lambda item: monomial_sort_key(item[0]))

    def coefficient(self, exps: Exponents):
        return self._terms.get(tuple(exps), self.ring.domain.zero)

    def constant_term(self):
        return self.coefficient((0,) * self.ring.num_vars)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = self.ring.constant(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            _check_same_ring(self, other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other) -> TruncatedSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            value = out[e] + c if e in out else c
            if value:
                out[e] = value
            else:
                out.pop(e, None)
        return TruncatedSeries._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> TruncatedSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> TruncatedSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def multiply(self, other, upto: int | None = None) -> TruncatedSeries:
        """Product reduced modulo m^{upto+1} (default: the ring's truncation)."""
        other = self._coerce(other)
        limit = self.ring.trunc if upto is None else min(upto, self.ring.trunc)
        return TruncatedSeries._raw(self.ring, _multiply_terms(self._terms, other._terms, limit))

    def __mul__(self, other) -> TruncatedSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.multiply(other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> TruncatedSeries:
        return power(self, exponent)

    def scale(self, scalar) -> TruncatedSeries:
        c = self.ring.scalar(scalar)
        if not c:
            return self.ring.zero()
        return TruncatedSeries._raw(self.ring, {e: v * c for e, v in self._terms.items()})

    def ord(self) -> ExtOrder:
        if not self._terms:
            return ExtOrder.at_least(self.ring.trunc + 1)
        return ExtOrder(min(sum(e) for e in self._terms))

    def degree(self) -> int:
        """Highest total degree of a stored term (0 for the zero series)."""
        return max((sum(e) for e in self._terms), default=0)

    def homogeneous_part(self, d: int) -> TruncatedSeries:
        if not 0 <= d <= self.ring.trunc:
            raise PreconditionError(f"degree {d} outside 0..{self.ring.trunc}")
        return TruncatedSeries._raw(
            self.ring, {e: c for e, c in self._terms.items() if sum(e) == d}
        )

    def initial_form(self) -> TruncatedSeries:
        if not self._terms:
            raise PreconditionError("initial form of zero undefined")
        return self.homogeneous_part(self.ord().value)

    def truncated(self, d: int) -> TruncatedSeries:
        """Image modulo m^{d+1}."""
        return TruncatedSeries._raw(
            self.ring, {e: c for e, c in self._terms.items() if sum(e) <= d}
        )

    def with_trunc(self, trunc: int) -> TruncatedSeries:
        """The same terms seen in the ring truncated at `trunc` instead of D."""
        ring = self.ring.with_trunc(trunc)
        return TruncatedSeries._raw(ring, {e: c for e, c in self._terms.items() if sum(e) <= trunc})

    def high_part(self, d: int) -> TruncatedSeries:
        """Terms of degree >= d."""
        return TruncatedSeries._raw(
            self.ring, {e: c for e, c in self._terms.items() if sum(e) >= d}
        )

    def shifted(self, exps: Exponents) -> TruncatedSeries:
        """Product with the monomial T^exps."""
        limit = self.ring.trunc
        out = {}
        for e, c in self._terms.items():
            q = tuple(x + y for x, y in zip(e, exps))
            if sum(q) <= limit:
                out[q] = c
        return TruncatedSeries._raw(self.ring, out)

    def divide_by_monomial(self, exps: Exponents) -> TruncatedSeries | None:
        """Exact quotient by a monomial, or None when some term is not divisible."""
        out = {}
        for e, c in self._terms.items():
            q = tuple(x - y for x, y in zip(e, exps))
            if any(v < 0 for v in q):
                return None
            out[q] = c
        return TruncatedSeries._raw(self.ring, out)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def support_variables(self) -> set[int]:
        return {k for e in self._terms for k, v in enumerate(e) if v}

    def __str__(self) -> str:
        return format_series(self)

    def __repr__(self) -> str:
        return f"TruncatedSeries({format_series(self)!r})"


def power(a: TruncatedSeries, e: int, upto: int | None = None) -> TruncatedSeries:
    if e < 0:
        raise PreconditionError(f"exponent must be non-negative, got {e}")
    result = a.ring.one()
    base = a
    while e:
        if e & 1:
            result = result.multiply(base, upto)
        e >>= 1
        if e:
            base = base.multiply(base, upto)
    return result if upto is None else result.truncated(upto)


_OPERATIONS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
}


def ring_arithmetic(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    _check_same_ring(a, b)
    if op not in _OPERATIONS:
        raise PreconditionError(f"unknown operation '{op}', expected one of {sorted(_OPERATIONS)}")
    return _OPERATIONS[op](a, b)


def format_monomial(ring: RingSpec, exps: Exponents) -> str:
    parts = []
    for name, e in zip(ring.names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_series(series: TruncatedSeries) -> str:
    """Canonical text: ascending degree, graded-lex descending within a degree."""
    if not series:
        return "0"
    ring = series.ring
    K = ring.domain
    chunks = []
    for exps, coeff in series.sorted_terms():
        value = K.to_sympy(coeff)
        negative = bool(value.is_negative)
        magnitude = -value if negative else value
        mono = format_monomial(ring, exps)
        if not mono:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{magnitude}*{mono}"
        if not chunks:
            chunks.append(f"-{body}" if negative else body)
        else:
            chunks.append(f" - {body}" if negative else f" + {body}")
    return "".join(chunks)


def random_series(
    ring: RingSpec,
    rng: random.Random,
    min_degree: int = 1,
    max_degree: int | None = None,
    height: int = 3,
    density: float = 0.5,
) -> TruncatedSeries:
    """A seeded element with small-height integer coefficients in the given degree band."""
    top = ring.trunc if max_degree is None else min(max_degree, ring.trunc)
    terms = {}
    for exps in ring.monomials_between(min_degree, top):
        if rng.random() < density:
            c = rng.randint(-height, height)
            if c:
                terms[exps] = c
    return TruncatedSeries(ring, terms)
