"""Ideals, modules and powers of m as subspaces of the truncated coefficient space.

Coordinates are indexed by (component, monomial). Columns are ordered by degree
first, then component, then graded-lex within a degree, so that the reduced
echelon basis of a subspace U has lowest-degree pivots:

* the normal form of x modulo U has the largest possible order, which makes
  `distance_order` a single reduction, and
* U ∩ m^e is spanned by the basis rows whose pivot has degree >= e.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from sympy.polys.matrices import DomainMatrix

from algebra.errors import IncompatibleRingsError, PreconditionError, TruncationError
from algebra.series import Exponents, ExtOrder, RingSpec, TruncatedSeries

logger = logging.getLogger(__name__)

Vector = dict  # column -> nonzero scalar


@dataclass(frozen=True)
class IdealSpec:
    ring: RingSpec
    generators: tuple[TruncatedSeries, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if g.ring != self.ring:
                raise IncompatibleRingsError()
        object.__setattr__(self, "generators", gens)

    @classmethod
    def zero(cls, ring: RingSpec) -> IdealSpec:
        return cls(ring, ())

    def is_zero_ideal(self) -> bool:
        return all(not g for g in self.generators)

    def max_degree(self) -> int:
        return max((g.degree() for g in self.generators if g), default=0)

    def extended(self, *extra: TruncatedSeries) -> IdealSpec:
        return IdealSpec(self.ring, tuple(extra) + self.generators)

    def as_module(self) -> ModuleSpec:
        return ModuleSpec(self.ring, 1, tuple((g,) for g in self.generators))

    def __str__(self) -> str:
        if self.is_zero_ideal():
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


@dataclass(frozen=True)
class ModuleSpec:
    """Submodule of A^arity generated by the given vectors."""

    ring: RingSpec
    arity: int
    generators: tuple[tuple[TruncatedSeries, ...], ...] = ()

    def __post_init__(self):
        if self.arity < 1:
            raise PreconditionError(f"module arity must be >= 1, got {self.arity}")
        gens = tuple(tuple(g) for g in self.generators)
        for g in gens:
            if len(g) != self.arity:
                raise PreconditionError(
                    f"arity mismatch: generator of length {len(g)} in a module of arity {self.arity}"
                )
            for entry in g:
                if entry.ring != self.ring:
                    raise IncompatibleRingsError()
        object.__setattr__(self, "generators", gens)

    def max_degree(self) -> int:
        return max((e.degree() for g in self.generators for e in g if e), default=0)

    def __str__(self) -> str:
        if not self.generators:
            return "0"
        return "; ".join("(" + ", ".join(str(e) for e in g) + ")" for g in self.generators)


class CoordinateIndex:
    """Column layout of the coefficient space of A_D^arity."""

    def __init__(self, ring: RingSpec, arity: int):
        self.ring = ring
        self.arity = arity
        self.columns: list[tuple[int, Exponents]] = []
        self.offsets: list[int] = []
        for d in range(ring.trunc + 1):
            self.offsets.append(len(self.columns))
            for component in range(arity):
                for exps in ring.monomials(d):
                    self.columns.append((component, exps))
        self.offsets.append(len(self.columns))
        self.size = len(self.columns)
        self.position = {key: col for col, key in enumerate(self.columns)}
        self._degrees = [sum(exps) for _, exps in self.columns]

    def offset(self, degree: int) -> int:
        """First column of the given degree (size when beyond the truncation)."""
        if degree <= 0:
            return 0
        if degree > self.ring.trunc:
            return self.size
        return self.offsets[degree]

    def degree_of(self, column: int) -> int:
        return self._degrees[column]

    def encode(self, entries: Sequence[TruncatedSeries]) -> Vector:
        if len(entries) != self.arity:
            raise PreconditionError(
                f"arity mismatch: vector of length {len(entries)}, expected {self.arity}"
            )
        vector = {}
        for component, series in enumerate(entries):
            if series.ring != self.ring:
                raise IncompatibleRingsError()
            for exps, coeff in series.terms.items():
                vector[self.position[(component, exps)]] = coeff
        return vector

    def decode(self, vector: Mapping[int, object]) -> tuple[TruncatedSeries, ...]:
        parts: list[dict] = [{} for _ in range(self.arity)]
        for column, coeff in vector.items():
            component, exps = self.columns[column]
            parts[component][exps] = coeff
        return tuple(TruncatedSeries._raw(self.ring, p) for p in parts)


@lru_cache(maxsize=None)
def coordinate_index(ring: RingSpec, arity: int) -> CoordinateIndex:
    return CoordinateIndex(ring, arity)


def _echelonize(domain, num_columns: int, vectors: Iterable[Vector]) -> tuple[list[Vector], list[int]]:
    rows = {}
    for vector in vectors:
        if vector:
            rows[len(rows)] = dict(vector)
    if not rows:
        return [], []
    matrix = DomainMatrix(rows, (len(rows), num_columns), domain)
    reduced, pivots = matrix.rref()
    basis: list[Vector] = [{} for _ in pivots]
    for (r, c), value in reduced.to_dok().items():
        if r < len(pivots) and value:
            basis[r][c] = value
    return basis, list(pivots)


class Subspace:
    """A subspace of A_D^arity held as a reduced row-echelon basis."""

    __slots__ = ("ring", "arity", "rows", "pivots", "_by_pivot")

    def __init__(self, ring: RingSpec, arity: int, rows: list[Vector], pivots: list[int]):
        self.ring = ring
        self.arity = arity
        self.rows = rows
        self.pivots = pivots
        self._by_pivot = dict(zip(pivots, rows))

    @classmethod
    def from_vectors(cls, ring: RingSpec, arity: int, vectors: Iterable[Vector]) -> Subspace:
        index = coordinate_index(ring, arity)
        rows, pivots = _echelonize(ring.domain, index.size, vectors)
        return cls(ring, arity, rows, pivots)

    @classmethod
    def zero(cls, ring: RingSpec, arity: int = 1) -> Subspace:
        return cls(ring, arity, [], [])

    @property
    def index(self) -> CoordinateIndex:
        return coordinate_index(self.ring, self.arity)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.arity == other.arity
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.arity, tuple(self.pivots)))

    def __repr__(self) -> str:
        return f"Subspace(arity={self.arity}, dim={self.dim}, trunc={self.ring.trunc})"

    def reduce(self, vector: Mapping[int, object]) -> Vector:
        """Normal form: the vector minus its projection on the pivot columns."""
        out = dict(vector)
        for column, coeff in vector.items():
            row = self._by_pivot.get(column)
            if row is None:
                continue
            for c, v in row.items():
                current = out.get(c)
                value = -(coeff * v) if current is None else current - coeff * v
                if value:
                    out[c] = value
                else:
                    out.pop(c, None)
        return out

    def contains_vector(self, vector: Mapping[int, object]) -> bool:
        return not self.reduce(vector)

    def filtration(self, degree: int) -> Subspace:
        """U ∩ m^degree."""
        start = self.index.offset(degree)
        keep = [(p, r) for p, r in zip(self.pivots, self.rows) if p >= start]
        return Subspace(self.ring, self.arity, [r for _, r in keep], [p for p, _ in keep])

    def basis(self) -> list[tuple[TruncatedSeries, ...]]:
        index = self.index
        return [index.decode(row) for row in self.rows]

    def basis_series(self) -> list[TruncatedSeries]:
        """Basis elements of an arity-1 subspace."""
        return [entries[0] for entries in self.basis()]


def _check_compatible(U: Subspace, V: Subspace) -> None:
    if U.ring != V.ring:
        raise IncompatibleRingsError()
    if U.arity != V.arity:
        raise PreconditionError(f"arity mismatch: {U.arity} vs {V.arity}")


def _as_entries(x) -> tuple[TruncatedSeries, ...]:
    return (x,) if isinstance(x, TruncatedSeries) else tuple(x)


@lru_cache(maxsize=512)
def span_module_times_m_power(module: ModuleSpec, k: int) -> Subspace:
    """The subspace m^k·M: all u·g with u a monomial of degree >= k."""
    ring = module.ring
    index = coordinate_index(ring, module.arity)
    vectors = []
    for gen in module.generators:
        low = min((e.ord() for e in gen), default=ExtOrder.at_least(ring.trunc + 1))
        if not low.exact:
            continue
        for exps in ring.monomials_between(k, ring.trunc - low.value):
            vectors.append(index.encode([e.shifted(exps) for e in gen]))
    span = Subspace.from_vectors(ring, module.arity, vectors)
    logger.debug("span of m^%d * module: dim %d from %d vectors", k, span.dim, len(vectors))
    return span


def span_module(module: ModuleSpec) -> Subspace:
    return span_module_times_m_power(module, 0)


def span_ideal(ideal: IdealSpec) -> Subspace:
    return span_module(ideal.as_module())


def span_m_power(ring: RingSpec, i: int, arity: int = 1) -> Subspace:
    if not 0 <= i <= ring.trunc + 1:
        raise PreconditionError(f"power of m must lie in 0..{ring.trunc + 1}, got {i}")
    index = coordinate_index(ring, arity)
    one = ring.domain.one
    columns = list(range(index.offset(i), index.size))
    return Subspace(ring, arity, [{c: one} for c in columns], columns)


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    _check_compatible(U, V)
    return Subspace.from_vectors(U.ring, U.arity, U.rows + V.rows)


def subspace_intersect(U: Subspace, V: Subspace) -> Subspace:
    """U ∩ V by echelonizing the stacked block rows (u | u) and (v | 0)."""
    _check_compatible(U, V)
    n = U.index.size
    stacked = []
    for row in U.rows:
        block = dict(row)
        block.update({c + n: v for c, v in row.items()})
        stacked.append(block)
    stacked.extend(dict(row) for row in V.rows)
    rows, pivots = _echelonize(U.ring.domain, 2 * n, stacked)
    common = [
        {c - n: v for c, v in row.items()}
        for row, pivot in zip(rows, pivots)
        if pivot >= n
    ]
    return Subspace.from_vectors(U.ring, U.arity, common)


def contains(U: Subspace, V: Subspace) -> bool:
    """Whether V ⊆ U."""
    _check_compatible(U, V)
    return all(U.contains_vector(row) for row in V.rows)


def member(x, U: Subspace) -> bool:
    return U.contains_vector(U.index.encode(_as_entries(x)))


def distance_order(x, U: Subspace) -> ExtOrder:
    """max{n <= D+1 : x ∈ U + m^n}."""
    index = U.index
    residue = U.reduce(index.encode(_as_entries(x)))
    if not residue:
        return ExtOrder.at_least(U.ring.trunc + 1)
    return ExtOrder(min(index.degree_of(c) for c in residue))


@dataclass
class AffineSolution:
    """particular + span(kernel), coordinates as sparse dicts."""

    num_unknowns: int
    particular: dict
    kernel: list[dict] = field(default_factory=list)

    def dense_particular(self, domain) -> list:
        return [self.particular.get(j, domain.zero) for j in range(self.num_unknowns)]

    def points(self, domain, elements: Sequence) -> Iterator[list]:
        """Every point of the solution set, for a finite field with the given elements."""
        base = self.dense_particular(domain)
        for weights in itertools.product(elements, repeat=len(self.kernel)):
            point = list(base)
            for w, direction in zip(weights, self.kernel):
                if not w:
                    continue
                for j, v in direction.items():
                    point[j] = point[j] + w * v
            yield point

    def size(self, field_size: int) -> int:
        return field_size ** len(self.kernel)


def solve_affine(
    domain,
    coefficients: Sequence[Mapping[int, object]],
    rhs: Sequence,
    num_unknowns: int,
) -> AffineSolution | None:
    """Solve the sparse system coefficients · v = rhs exactly; None when inconsistent."""
    augmented = []
    for row, value in zip(coefficients, rhs):
        full = {c: v for c, v in row.items() if v}
        if value:
            full[num_unknowns] = value
        augmented.append(full)
    rows, pivots = _echelonize(domain, num_unknowns + 1, augmented)
    if pivots and pivots[-1] == num_unknowns:
        return None
    particular = {}
    for row, pivot in zip(rows, pivots):
        value = row.get(num_unknowns)
        if value:
            particular[pivot] = value
    pivot_set = set(pivots)
    kernel = []
    for free in range(num_unknowns):
        if free in pivot_set:
            continue
        direction = {free: domain.one}
        for row, pivot in zip(rows, pivots):
            value = row.get(free)
            if value:
                direction[pivot] = -value
        kernel.append(direction)
    return AffineSolution(num_unknowns, particular, kernel)


def colon_by(ideal: IdealSpec, f: TruncatedSeries) -> Subspace:
    """(I : f) at truncation: the x in A_{D-e} with x·f ∈ I + m^{D+1}, e = ord(f).

    Multiplication by f is well defined from A_{D-e} to A_D, so the colon is a
    subspace of the algebra truncated at D - e.
    """
    ring = ideal.ring
    if f.ring != ring:
        raise IncompatibleRingsError()
    order = f.ord()
    if not order.exact:
        raise PreconditionError("f vanishes modulo m^{D+1}; every element divides into I")
    if ring.trunc - order.value < 1:
        raise TruncationError(f"ord(f) = {order.value} leaves no room below D = {ring.trunc}")
    small = ring.with_trunc(ring.trunc - order.value)
    span = span_ideal(ideal)
    monomials = list(small.monomials_between(0, small.trunc))
    equations: dict[int, dict] = {}
    for unknown, exps in enumerate(monomials):
        image = span.reduce(span.index.encode([f.shifted(exps)]))
        for column, value in image.items():
            equations.setdefault(column, {})[unknown] = value
    rows = list(equations.values())
    solution = solve_affine(ring.domain, rows, [ring.domain.zero] * len(rows), len(monomials))
    index = coordinate_index(small, 1)
    vectors = [
        {index.position[(0, monomials[unknown])]: value for unknown, value in direction.items()}
        for direction in solution.kernel
    ]
    colon = Subspace.from_vectors(small, 1, vectors)
    logger.debug("colon by f of order %d: dim %d at truncation %d", order.value, colon.dim, small.trunc)
    return colon
