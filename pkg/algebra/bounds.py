"""Closed-form Artin-function and ICL bounds as exact functions of i.

Constants are inputs: they come from scans elsewhere in the package or from the
user, never derived here. Arithmetic is exact rational; each formula applies its own
floor/ceiling and the final value is floored to an integer.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Callable, Sequence

from algebra.errors import MissingParameterError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundParams:
    a: Fraction | None = None  # ICL slope
    b: Fraction | None = None  # ICL offset
    c: Fraction | None = None  # Rees constant
    i_I: int | None = None
    i_P: int | None = None
    i_Jn: int | None = None
    n: int | None = None
    t: int | None = None
    k: int | None = None
    ord_g: int | None = None
    max_ord: int | None = None
    nu_x: int | None = None

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, Fraction(value))
        if self.a is not None and self.a < 1:
            raise PreconditionError(f"ICL slope a must be >= 1, got {self.a}")
        for name in ("b", "c", "i_I", "i_P", "i_Jn", "k", "ord_g", "max_ord", "nu_x"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise PreconditionError(f"parameter {name} must be >= 0, got {value}")
        for name in ("n", "t"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise PreconditionError(f"parameter {name} must be >= 1, got {value}")

    def given(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}


@dataclass(frozen=True)
class BoundFormula:
    formula_id: str
    expression: str
    requires: tuple[str, ...]
    compute: Callable[[BoundParams, int], Fraction | int]
    source: str
    argument: str = "i"


def _log2_floor(n: int) -> int:
    return n.bit_length() - 1


def _lem64(p: BoundParams, i: int) -> Fraction:
    top = _log2_floor(p.n)
    ratio = 2 * p.a
    return ratio ** (top + 1) * (i + p.i_P + p.i_I) + p.b * sum(ratio**j for j in range(top + 1))


FORMULAS: dict[str, BoundFormula] = {
    f.formula_id: f
    for f in (
        BoundFormula(
            "prop43i", "a*i + a*nu + a*i_I + b", ("a", "b", "nu_x", "i_I"),
            lambda p, i: p.a * i + p.a * p.nu_x + p.a * p.i_I + p.b,
            "uniform bound from an ICL, linear form x X0 + sum f_k X_k",
        ),
        BoundFormula(
            "prop43ii", "(a+c)(i+i_I) + max(b, i_I)", ("a", "b", "c", "i_I"),
            lambda p, i: (p.a + p.c) * (i + p.i_I) + max(p.b, p.i_I),
            "XY + sum f_k Z_k from an ICL and a Rees constant",
        ),
        BoundFormula(
            "thm45", "i + a*nu + i_I + b", ("a", "b", "nu_x", "i_I"),
            lambda p, i: i + p.a * p.nu_x + p.i_I + p.b,
            "uniform Artin-Rees majoration",
        ),
        BoundFormula(
            "cor48_artin", "2i + 3*max_ord", ("max_ord",),
            lambda p, i: 2 * i + 3 * p.max_ord,
            "XY + sum f_k Z_k with regular initial forms",
        ),
        BoundFormula(
            "ex433", "i + nu + ord_g", ("nu_x", "ord_g"),
            lambda p, i: i + p.nu_x + p.ord_g,
            "x X0 + f X1 with f = T1^2 + g(T2, T3), ord g odd",
        ),
        BoundFormula(
            "ex434", "i + max(k, nu+1)", ("k", "nu_x"),
            lambda p, i: i + max(p.k, p.nu_x + 1),
            "fX + hY with f = T1^k + g, ord g = k+1",
        ),
        BoundFormula(
            "lem64", "(2a)^(floor(log2 n)+1)(i+i_P+i_I) + b*sum_{j<=floor(log2 n)} (2a)^j",
            ("a", "b", "n", "i_P", "i_I"),
            _lem64,
            "powers x^n through repeated squaring and an ICL",
        ),
        BoundFormula(
            "lem66", "n*ceil((i+i_I)/n) + n*c", ("n", "i_I", "c"),
            lambda p, i: p.n * math.ceil(Fraction(i + p.i_I, p.n)) + p.n * p.c,
            "X^n + sum f_j Z_j from the Rees constant",
        ),
        BoundFormula(
            "prop72", "i + i_I + n(c+1)", ("i_I", "n", "c"),
            lambda p, i: i + p.i_I + p.n * (p.c + 1),
            "X^n + sum f_j Z_j with a radical ideal",
        ),
        BoundFormula(
            "prop73", "i + i_I + t*i_Jn + t*n(c+1)", ("i_I", "t", "i_Jn", "n", "c"),
            lambda p, i: i + p.i_I + p.t * p.i_Jn + p.t * p.n * (p.c + 1),
            "f^t X^n + sum f_j Z_j with (f, f_j) radical",
        ),
        BoundFormula(
            "prop74", "floor((i-a)/(n*t)) - t(a+n)", ("a", "n", "t"),
            lambda p, i: math.floor((i - p.a) / (p.n * p.t)) - p.t * (p.a + p.n),
            "inclusion exponent with a-th roots of unity in the base field",
        ),
        BoundFormula(
            "lin31", "i + i_I", ("i_I",),
            lambda p, i: i + p.i_I,
            "linear forms, weak Artin-Rees",
        ),
        BoundFormula(
            "cor48_icl", "2s + 3*max_ord", ("max_ord",),
            lambda p, s: 2 * s + 3 * p.max_ord,
            "ICL nu(gh) <= 2(nu(g)+nu(h)) + 3*max_ord, s = nu(g)+nu(h)",
            argument="s",
        ),
        BoundFormula(
            "ex434_icl", "2s + 3k", ("k",),
            lambda p, s: 2 * s + 3 * p.k,
            "ICL for f = T1^k + g, s = nu(g)+nu(h)",
            argument="s",
        ),
    )
}


def get_formula(formula_id: str) -> BoundFormula:
    try:
        return FORMULAS[formula_id]
    except KeyError:
        raise PreconditionError(
            f"unknown formula '{formula_id}', expected one of {sorted(FORMULAS)}"
        ) from None


def evaluate_bound(formula_id: str, params: BoundParams, i: int) -> int:
    formula = get_formula(formula_id)
    if i < 0:
        raise PreconditionError(f"i must be >= 0, got {i}")
    for name in formula.requires:
        if getattr(params, name) is None:
            raise MissingParameterError(name, formula_id)
    return math.floor(Fraction(formula.compute(params, i)))


@dataclass(frozen=True)
class BoundFunction:
    formula_id: str
    params: BoundParams

    def __post_init__(self):
        get_formula(self.formula_id)

    @property
    def formula(self) -> BoundFormula:
        return FORMULAS[self.formula_id]

    def evaluate(self, i: int) -> int:
        return evaluate_bound(self.formula_id, self.params, i)

    def table(self, i_max: int) -> list[tuple[int, int]]:
        return [(i, self.evaluate(i)) for i in range(i_max + 1)]


@dataclass(frozen=True)
class CrossCheckRow:
    i: int
    measured: Fraction
    bound: int
    exceeds: bool


@dataclass
class CrossCheckReport:
    formula_id: str
    kind: str
    rows: list[CrossCheckRow]
    verdict: str
    flagged: list[int] = field(default_factory=list)


def cross_check_bound(
    formula_id: str,
    params: BoundParams,
    empirical: Sequence[tuple[int, Fraction | int]],
    kind: str = "upper",
) -> CrossCheckReport:
    """Compare measured values with a catalog bound.

    kind="upper": the formula claims to bound the measured quantity from above; any
    point above it is flagged (a bug or a truncation artifact).
    kind="lower": the measured values are themselves lower bounds of the true
    function; once they overtake the formula, it cannot be an upper bound.
    """
    if kind not in ("upper", "lower"):
        raise PreconditionError(f"kind must be 'upper' or 'lower', got '{kind}'")
    bound = BoundFunction(formula_id, params)
    rows = []
    for i, value in empirical:
        limit = bound.evaluate(i)
        measured = Fraction(value)
        rows.append(CrossCheckRow(i, measured, limit, measured > limit))
    flagged = [row.i for row in rows if row.exceeds]
    if not flagged:
        verdict = "consistent"
    elif kind == "upper":
        verdict = "measured value exceeds bound"
    else:
        verdict = "no affine bound"
    if flagged:
        logger.warning("%s: %s at i=%s", formula_id, verdict, flagged)
    return CrossCheckReport(formula_id, kind, rows, verdict, flagged)
