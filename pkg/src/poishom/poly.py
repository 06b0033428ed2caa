"""Exact sparse multivariate polynomials over the rationals.

A polynomial is a finite map from exponent tuples to nonzero Fraction
coefficients, tagged with its ordered variable-name context.  The zero
polynomial is the empty map.  Values are immutable after construction and
every operation is a pure function, so polynomials can be shared freely
between concurrent tasks.

Text input follows this grammar (whitespace insignificant, implicit
multiplication NOT allowed):

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := uint | uint '/' uint | ident | '(' expr ')'
    ident  := ASCII letter, then letters/digits/underscores

Canonical printing sorts monomials by descending graded-lex order (total
degree first, then exponent tuple, in the construction-time variable
order) and emits only grammar-conformant text.  The grammar has no unary
minus, so a polynomial whose leading term is negative prints with a
``0 - `` prefix; parse(print(p)) == p always holds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

#: sentinel results of :meth:`Polynomial.weight`
WEIGHT_ZERO = "zero"
WEIGHT_INHOMOGENEOUS = "inhomogeneous"


class PolyParseError(ValueError):
    """Malformed polynomial text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ContextMismatchError(ValueError):
    """Raised when combining values over different variable contexts."""


class Polynomial:
    """Sparse polynomial over Q with a fixed ordered variable context.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    Fraction coefficients.  Treat instances as immutable; arithmetic
    returns new objects.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str], terms: Mapping | Iterable = ()):
        self.vars: tuple[str, ...] = tuple(vars)
        n = len(self.vars)
        clean: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(
                    f"monomial {exps} has {len(exps)} exponents, expected {n}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in monomial {exps}")
            c = clean.get(exps, _ZERO) + Fraction(coeff)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self.terms: dict[Monomial, Fraction] = clean
        self._hash: int | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars: Iterable[str]) -> "Polynomial":
        return cls(vars, ())

    @classmethod
    def constant(cls, vars: Iterable[str], value: Scalar) -> "Polynomial":
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): Fraction(value)})

    @classmethod
    def variable(cls, vars: Iterable[str], index: int) -> "Polynomial":
        vars = tuple(vars)
        if not 0 <= index < len(vars):
            raise IndexError(f"variable index {index} out of range")
        exps = [0] * len(vars)
        exps[index] = 1
        return cls(vars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(
        cls, vars: Iterable[str], exps: Iterable[int], coeff: Scalar = 1
    ) -> "Polynomial":
        return cls(vars, {tuple(exps): Fraction(coeff)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def total_degree(self) -> int:
        """Maximum total degree; 0 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=0)

    def constant_value(self) -> Fraction:
        """The coefficient of the constant monomial (0 if absent)."""
        return self.terms.get((0,) * len(self.vars), _ZERO)

    def weight(self, weights: Iterable[int]):
        """Weighted degree under strictly positive integer weights.

        Returns the common weight if every monomial has the same weighted
        degree, ``WEIGHT_ZERO`` for the zero polynomial, and
        ``WEIGHT_INHOMOGENEOUS`` otherwise.
        """
        weights = tuple(weights)
        if len(weights) != len(self.vars):
            raise ValueError("weight vector length does not match context")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be strictly positive")
        if not self.terms:
            return WEIGHT_ZERO
        found = None
        for exps in self.terms:
            w = sum(e * wt for e, wt in zip(exps, weights))
            if found is None:
                found = w
            elif w != found:
                return WEIGHT_INHOMOGENEOUS
        return found

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise ContextMismatchError(
                    f"variable contexts differ: {self.vars} vs {other.vars}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.vars, other)
        return None

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self.terms)
        for exps, c in rhs.terms.items():
            s = out.get(exps, _ZERO) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return _raw(self.vars, out)

    __radd__ = __add__

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __neg__(self):
        return _raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if not f:
                return Polynomial.zero(self.vars)
            return _raw(self.vars, {e: c * f for e, c in self.terms.items()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in rhs.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(key, _ZERO) + ca * cb
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return _raw(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial power requires a non-negative integer")
        result = Polynomial.constant(self.vars, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def diff(self, index: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``index``."""
        if not 0 <= index < len(self.vars):
            raise IndexError(f"variable index {index} out of range")
        out: dict[Monomial, Fraction] = {}
        for exps, c in self.terms.items():
            e = exps[index]
            if e:
                key = exps[:index] + (e - 1,) + exps[index + 1 :]
                s = out.get(key, _ZERO) + c * e
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return _raw(self.vars, out)

    # -- comparisons and printing ------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                return self == Polynomial.constant(self.vars, other)
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical (descending graded-lex) print order."""
        return sorted(
            self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True
        )

    def __str__(self):
        if not self.terms:
            return "0"
        parts: list[str] = []
        for pos, (exps, coeff) in enumerate(self.sorted_terms()):
            frag = _format_term(self.vars, exps, abs(coeff))
            if pos == 0:
                parts.append(frag if coeff > 0 else f"0 - {frag}")
            else:
                parts.append(f" {'+' if coeff > 0 else '-'} {frag}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({self.vars!r}, {str(self)!r})"


_ZERO = Fraction(0)


def _raw(vars: tuple[str, ...], terms: dict[Monomial, Fraction]) -> Polynomial:
    # Internal fast path: terms already canonical (no zeros, right arity).
    p = Polynomial.__new__(Polynomial)
    p.vars = vars
    p.terms = terms
    p._hash = None
    return p


def _format_term(vars: tuple[str, ...], exps: Monomial, coeff: Fraction) -> str:
    pieces: list[str] = []
    if coeff != 1 or not any(exps):
        pieces.append(str(coeff))
    for name, e in zip(vars, exps):
        if e == 1:
            pieces.append(name)
        elif e > 1:
            pieces.append(f"{name}^{e}")
    return "*".join(pieces)


# -- parsing ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, vars: tuple[str, ...]):
        self.text = text
        self.vars = vars
        self.index = {name: i for i, name in enumerate(vars)}
        self.pos = 0

    def fail(self, message: str):
        raise PolyParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, char: str) -> bool:
        if self.peek() == char:
            self.pos += 1
            return True
        return False

    def read_uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.fail("expected an unsigned integer")
        return int(self.text[start : self.pos])

    def read_ident(self) -> str:
        self.skip_ws()
        start = self.pos
        self.pos += 1  # caller checked the first character is a letter
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start : self.pos]

    def parse_expr(self) -> Polynomial:
        result = self.parse_term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                result = result + self.parse_term()
            elif ch == "-":
                self.pos += 1
                result = result - self.parse_term()
            else:
                return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while self.take("*"):
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Polynomial:
        base = self.parse_base()
        if self.take("^"):
            if self.peek() == "-":
                self.fail("negative exponent")
            return base ** self.read_uint()
        return base

    def parse_base(self) -> Polynomial:
        ch = self.peek()
        if ch.isdigit():
            num = self.read_uint()
            if self.take("/"):
                self.skip_ws()
                mark = self.pos
                den = self.read_uint()
                if den == 0:
                    self.pos = mark
                    self.fail("zero denominator")
                return Polynomial.constant(self.vars, Fraction(num, den))
            return Polynomial.constant(self.vars, num)
        if ch.isalpha():
            mark = self.pos
            name = self.read_ident()
            if name not in self.index:
                self.pos = mark
                self.fail(f"unknown variable {name!r}")
            return Polynomial.variable(self.vars, self.index[name])
        if ch == "(":
            self.pos += 1
            inner = self.parse_expr()
            if not self.take(")"):
                self.fail("expected ')'")
            return inner
        self.fail("expected a number, variable, or '('")


def parse_poly(text: str, vars: Iterable[str]) -> Polynomial:
    """Parse ``text`` over the ordered variable context ``vars``.

    Raises :class:`PolyParseError` with the offending position on syntax
    errors, unknown variable names, and negative exponents.
    """
    parser = _Parser(text, tuple(vars))
    result = parser.parse_expr()
    parser.skip_ws()
    if parser.pos != len(parser.text):
        parser.fail("unexpected trailing input")
    return result
