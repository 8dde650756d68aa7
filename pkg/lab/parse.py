"""Text input: polynomials, ideals, modules and polynomial systems.

The grammar is checked token by token first so errors can point at a position;
sympy then builds the (already safe) expression tree, which is folded with the
truncated arithmetic of A_D.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from sympy import Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from algebra.artin import PolySystem
from algebra.errors import ParseError
from algebra.series import RingSpec, TruncatedSeries
from algebra.subspace import IdealSpec, ModuleSpec

TRANSFORMATIONS = standard_transformations + (convert_xor,)

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^/()]))")
_UNKNOWN = re.compile(r"X(\d+)$")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[offset]!r}", offset)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    return tokens


def _check_grammar(text: str, allowed: Sequence[str]) -> None:
    """Validate operands, operators and parentheses; raise ParseError at the first problem."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression", 0)
    allowed = set(allowed)
    depth = 0
    expect_operand = True
    for n, (kind, value, pos) in enumerate(tokens):
        following = tokens[n + 1] if n + 1 < len(tokens) else None
        if kind == "name":
            if value not in allowed:
                raise ParseError(f"unknown variable '{value}'", pos)
            if not expect_operand:
                raise ParseError("missing operator", pos)
            expect_operand = False
        elif kind == "number":
            if not expect_operand:
                raise ParseError("missing operator", pos)
            expect_operand = False
        elif value == "(":
            if not expect_operand:
                raise ParseError("missing operator", pos)
            depth += 1
        elif value == ")":
            if expect_operand:
                raise ParseError("missing operand", pos)
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", pos)
        elif value in "+-" and expect_operand:
            continue  # unary sign
        else:
            if expect_operand:
                raise ParseError(f"missing operand before '{value}'", pos)
            if value == "^":
                _check_exponent(tokens, n)
            elif value == "/":
                if tokens[n - 1][0] != "number" or following is None or following[0] != "number":
                    raise ParseError("'/' is only allowed between integer literals", pos)
                if int(following[1]) == 0:
                    raise ParseError("division by zero", following[2])
            expect_operand = True
    if expect_operand:
        raise ParseError("expression ends with an operator", len(text.rstrip()))
    if depth:
        raise ParseError("unbalanced '('", len(text.rstrip()))


def _check_exponent(tokens, n: int) -> None:
    pos = tokens[n][2]
    rest = tokens[n + 1 : n + 4]
    values = [t[1] for t in rest]
    if values[:1] == ["-"] or values[:2] == ["(", "-"]:
        raise ParseError("negative exponent", pos)
    if rest and rest[0][0] == "number":
        return
    if len(rest) == 3 and values[0] == "(" and rest[1][0] == "number" and values[2] == ")":
        return
    raise ParseError("exponent must be a non-negative integer literal", pos)


Polynomial = dict  # exponents of the unknowns -> nonzero coefficient in A_D


def _add(a: Polynomial, b: Polynomial) -> Polynomial:
    out = dict(a)
    for alpha, coeff in b.items():
        total = out[alpha] + coeff if alpha in out else coeff
        if total:
            out[alpha] = total
        else:
            out.pop(alpha, None)
    return out


def _mul(a: Polynomial, b: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for alpha, ca in a.items():
        for beta, cb in b.items():
            out = _add(out, {tuple(x + y for x, y in zip(alpha, beta)): ca * cb})
    return out


def _pow(base: Polynomial, e: int, one: Polynomial) -> Polynomial:
    result = one
    while e:
        if e & 1:
            result = _mul(result, base)
        e >>= 1
        if e:
            base = _mul(base, base)
    return result


def _evaluate(expr, ring: RingSpec, unknowns: Sequence[str]) -> Polynomial:
    """Fold the sympy tree with truncated products, so no intermediate exceeds degree D."""
    n = len(unknowns)
    origin = (0,) * n

    def constant(series: TruncatedSeries) -> Polynomial:
        return {origin: series} if series else {}

    def walk(node) -> Polynomial:
        if node.is_Rational:
            return constant(ring.constant(ring.scalar(Fraction(int(node.p), int(node.q)))))
        if node.is_Symbol:
            if node.name in unknowns:
                alpha = [0] * n
                alpha[unknowns.index(node.name)] = 1
                return {tuple(alpha): ring.one()}
            return constant(ring.variable(node.name))
        if node.is_Add:
            total: Polynomial = {}
            for arg in node.args:
                total = _add(total, walk(arg))
            return total
        if node.is_Mul:
            product = constant(ring.one())
            for arg in node.args:
                product = _mul(product, walk(arg))
            return product
        if node.is_Pow and node.exp.is_Integer and int(node.exp) >= 0:
            return _pow(walk(node.base), int(node.exp), constant(ring.one()))
        raise ParseError(f"unsupported expression '{node}'")

    return walk(expr)


def _to_polynomial(text: str, ring: RingSpec, unknowns: Sequence[str] = ()) -> Polynomial:
    names = tuple(unknowns) + ring.names
    _check_grammar(text, names)
    local = {name: Symbol(name) for name in names}
    try:
        expr = parse_expr(text, local_dict=local, transformations=TRANSFORMATIONS)
    except (SyntaxError, TypeError) as exc:
        raise ParseError(f"malformed expression: {exc}", getattr(exc, "offset", None)) from None
    return _evaluate(expr, ring, tuple(unknowns))


def parse_poly(text: str, ring: RingSpec) -> TruncatedSeries:
    """An element of A_D from text such as 'T1^2*T2 + 3*T3'; terms above D are dropped."""
    return _to_polynomial(text, ring).get((), ring.zero())


def _split_top_level(text: str, separator: str) -> list[tuple[str, int]]:
    """Split on separators outside parentheses, keeping each piece's offset."""
    pieces = []
    depth = 0
    start = 0
    for pos, char in enumerate(text):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        elif char == separator and depth == 0:
            pieces.append((text[start:pos], start))
            start = pos + 1
    pieces.append((text[start:], start))
    return pieces


def _at_offset(parser, piece: str, offset: int, *args):
    """Run a parser on a slice of the input, reporting positions in the whole input."""
    try:
        return parser(piece, *args)
    except ParseError as exc:
        if exc.position is None:
            raise
        message = str(exc).rsplit(" (at position", 1)[0]
        raise ParseError(message, offset + exc.position) from None


def parse_ideal(text: str, ring: RingSpec) -> IdealSpec:
    """Comma-separated generators."""
    generators = tuple(_at_offset(parse_poly, piece, offset, ring) for piece, offset in _split_top_level(text, ","))
    return IdealSpec(ring, generators)


def parse_vector(text: str, ring: RingSpec) -> tuple[TruncatedSeries, ...]:
    """'(a, b, c)' or 'a, b, c'."""
    body = text.strip()
    offset = len(text) - len(text.lstrip())
    if body.startswith("(") and body.endswith(")") and _balanced_outer(body):
        body = body[1:-1]
        offset += 1
    return tuple(_at_offset(parse_poly, piece, offset + start, ring) for piece, start in _split_top_level(body, ","))


def _balanced_outer(body: str) -> bool:
    depth = 0
    for pos, char in enumerate(body):
        depth += char == "("
        depth -= char == ")"
        if depth == 0 and pos < len(body) - 1:
            return False
    return depth == 0


def parse_module(text: str, ring: RingSpec) -> ModuleSpec:
    """Generators of a submodule of A^r written '(a,b);(c,d)'."""
    generators = []
    for piece, offset in _split_top_level(text, ";"):
        generators.append(_at_offset(parse_vector, piece, offset, ring))
    arity = len(generators[0])
    return ModuleSpec(ring, arity, tuple(generators))


def _unknown_names(text: str, ring: RingSpec) -> tuple[str, ...]:
    highest = 0
    for kind, value, _ in _tokenize(text.replace(";", " ")):
        match = _UNKNOWN.match(value) if kind == "name" else None
        if match and value not in ring.names:
            highest = max(highest, int(match.group(1)))
    if highest == 0:
        raise ParseError("a system needs at least one unknown X1..Xn")
    return tuple(f"X{k}" for k in range(1, highest + 1))


def parse_system(text: str, ring: RingSpec, num_unknowns: int | None = None) -> PolySystem:
    """Equations separated by ';' in unknowns X1..Xn with coefficients in A_D."""
    unknowns = (
        tuple(f"X{k}" for k in range(1, num_unknowns + 1))
        if num_unknowns
        else _unknown_names(text, ring)
    )
    clash = set(unknowns) & set(ring.names)
    if clash:
        raise ParseError(f"unknown names {sorted(clash)} collide with ring variables")
    equations = []
    for piece, offset in _split_top_level(text, ";"):
        polynomial = _at_offset(_to_polynomial, piece, offset, ring, unknowns)
        equations.append(tuple(sorted(polynomial.items(), key=lambda item: item[0])))
    return PolySystem(ring, len(unknowns), tuple(equations), unknowns)
