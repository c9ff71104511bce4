"""Exact scalar arithmetic: rationals and rational functions in named parameters.

Every coefficient in this package is a ``Scalar``: an element of the field
Q(p1, ..., pn) of rational functions over the rationals in the parameters
declared by a :class:`ParameterContext`.  Values are immutable and kept in
a canonical form (fraction reduced, denominator normalized under graded-lex
monomial order; parameter-free values demote to plain rationals), so ``==``
is decidable, syntactic equality.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from sympy.polys.domains import QQ
from sympy.polys.fields import field as _sympy_field

Rational = Fraction

__all__ = [
    "Rational",
    "Scalar",
    "ParameterContext",
    "ScalarError",
    "ScalarSyntaxError",
    "normalize",
    "evaluate",
    "embed",
]


class ScalarError(ArithmeticError):
    """Raised for domain errors: zero divisors, unbound parameters."""


class ScalarSyntaxError(ValueError):
    """Raised on malformed scalar text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# Names that collide with coframe index notation are rejected.
_RESERVED = re.compile(r"^(e?\d+|dt)$")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

# ASCII aliases for the unicode spellings accepted on input.
_UNICODE_MAP = {
    "λ": "lam",   # lambda
    "ϑ": "vth",
    "₀": "0", "₁": "1", "₂": "2", "₃": "3", "₄": "4",
    "₅": "5", "₆": "6", "₇": "7", "₈": "8", "₉": "9",
}


def _fold_unicode(text: str) -> str:
    for src, dst in _UNICODE_MAP.items():
        text = text.replace(src, dst)
    return text


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _qq_to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


_CONTEXTS: dict = {}


class ParameterContext:
    """The set of parameter names available in one session.

    Parameters are global to a session; arithmetic is only defined between
    scalars of the same context.  Contexts are interned by name set so that
    two contexts with identical names are the same object.
    """

    def __new__(cls, names: Iterable[str] = ()):
        key = tuple(sorted(set(names)))
        cached = _CONTEXTS.get(key)
        if cached is not None:
            return cached
        self = super().__new__(cls)
        for name in key:
            if not _IDENT.match(name):
                raise ValueError(f"invalid parameter name {name!r}")
            if _RESERVED.match(name):
                raise ValueError(
                    f"parameter name {name!r} collides with coframe index notation"
                )
        if key:
            fld_and_gens = _sympy_field(",".join(key), QQ, order="grlex")
            self._field = fld_and_gens[0]
            self._gens = dict(zip(key, fld_and_gens[1:]))
        else:
            self._field = None
            self._gens = {}
        self.names = key
        self.zero = Scalar(self, Fraction(0))
        self.one = Scalar(self, Fraction(1))
        _CONTEXTS[key] = self
        return self

    def __repr__(self):
        return f"ParameterContext({list(self.names)!r})"

    def param(self, name: str) -> "Scalar":
        name = _fold_unicode(name)
        try:
            return Scalar(self, self._gens[name])
        except KeyError:
            raise ScalarError(f"unbound parameter {name!r}") from None

    def scalar(self, value) -> "Scalar":
        """Coerce an int, Fraction, str or Scalar into this context."""
        if isinstance(value, Scalar):
            if value.ctx is not self:
                raise ScalarError("scalar from a different parameter context")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise TypeError(f"expected int or Fraction, got {type(value).__name__}")
        return Scalar(self, Fraction(value))

    def parse(self, text: str) -> "Scalar":
        return _Parser(self, text).parse()

    def _lift(self, value: Fraction):
        """A field element with the given rational value (symbolic backend)."""
        return self._field(_to_qq(value))


def _demote(ctx: ParameterContext, raw):
    """Canonical representation: parameter-free values live as Fractions."""
    if isinstance(raw, Fraction):
        return raw
    if raw.numer.is_ground and raw.denom.is_ground:
        num = _qq_to_fraction(raw.numer.LC) if raw.numer else Fraction(0)
        den = _qq_to_fraction(raw.denom.LC)
        return num / den
    return raw


class Scalar:
    """An element of the rational function field of a :class:`ParameterContext`.

    Internally either a plain Fraction (parameter-free values) or a reduced
    fraction of polynomials; construction canonicalizes, so equality is
    syntactic.
    """

    __slots__ = ("ctx", "raw")

    def __init__(self, ctx: ParameterContext, raw):
        self.ctx = ctx
        self.raw = raw

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        if isinstance(self.raw, Fraction):
            return self.raw == 0
        return not self.raw

    @property
    def is_rational(self) -> bool:
        return isinstance(self.raw, Fraction)

    def params(self) -> frozenset:
        if isinstance(self.raw, Fraction):
            return frozenset()
        used = set()
        for poly in (self.raw.numer, self.raw.denom):
            for mono in poly.monoms():
                for name, exp in zip(self.ctx.names, mono):
                    if exp:
                        used.add(name)
        return frozenset(used)

    # -- arithmetic ---------------------------------------------------------

    def _pair(self, other):
        """(a, b) raw values in a common representation, or None."""
        if isinstance(other, Scalar):
            if other.ctx is not self.ctx:
                raise ScalarError("mixed parameter contexts")
            a, b = self.raw, other.raw
        elif isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            a, b = self.raw, Fraction(other)
        else:
            return None
        if isinstance(a, Fraction) and not isinstance(b, Fraction):
            a = self.ctx._lift(a)
        elif isinstance(b, Fraction) and not isinstance(a, Fraction):
            b = self.ctx._lift(b)
        return a, b

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Scalar(self.ctx, a + b if isinstance(a, Fraction) else _demote(self.ctx, a + b))

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Scalar(self.ctx, a - b if isinstance(a, Fraction) else _demote(self.ctx, a - b))

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Scalar(self.ctx, b - a if isinstance(a, Fraction) else _demote(self.ctx, b - a))

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Scalar(self.ctx, a * b if isinstance(a, Fraction) else _demote(self.ctx, a * b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if (b == 0) if isinstance(b, Fraction) else (not b):
            raise ScalarError("division by zero scalar")
        return Scalar(self.ctx, a / b if isinstance(a, Fraction) else _demote(self.ctx, a / b))

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if (a == 0) if isinstance(a, Fraction) else (not a):
            raise ScalarError("division by zero scalar")
        return Scalar(self.ctx, b / a if isinstance(a, Fraction) else _demote(self.ctx, b / a))

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0 and self.is_zero:
            raise ScalarError("division by zero scalar")
        raw = self.raw ** exponent
        return Scalar(self.ctx, raw if isinstance(raw, Fraction) else _demote(self.ctx, raw))

    def __neg__(self):
        return Scalar(self.ctx, -self.raw)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ctx is other.ctx and self.raw == other.raw
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return isinstance(self.raw, Fraction) and self.raw == Fraction(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.names, self.raw))

    def __bool__(self):
        return not self.is_zero

    # -- conversions --------------------------------------------------------

    def as_fraction(self) -> Fraction:
        if not isinstance(self.raw, Fraction):
            raise ScalarError(f"scalar {self} is not parameter-free")
        return self.raw

    def evaluate(self, bindings: Mapping[str, Union[int, Fraction]]) -> Fraction:
        """Exact value at the binding; every occurring parameter must be bound."""
        if isinstance(self.raw, Fraction):
            return self.raw
        folded = {_fold_unicode(k): Fraction(v) for k, v in bindings.items()}
        for name in self.params():
            if name not in folded:
                raise ScalarError(f"unbound parameter {name!r}")
        num = _eval_poly(self.raw.numer, self.ctx.names, folded)
        den = _eval_poly(self.raw.denom, self.ctx.names, folded)
        if den == 0:
            raise ScalarError("denominator vanishes at binding")
        return num / den

    def monic_parts(self):
        """(numerator, denominator) scalars with the denominator monic."""
        if isinstance(self.raw, Fraction):
            return Scalar(self.ctx, self.raw), self.ctx.one
        lc = _qq_to_fraction(self.raw.denom.LC)
        field = self.ctx._field
        num = Scalar(self.ctx, _demote(self.ctx, field.new(self.raw.numer) / field(_to_qq(Fraction(lc)))))
        den = Scalar(self.ctx, _demote(self.ctx, field.new(self.raw.denom) / field(_to_qq(Fraction(lc)))))
        return num, den

    # -- printing -----------------------------------------------------------

    def __str__(self):
        return _render(self)

    def __repr__(self):
        return f"Scalar({_render(self)})"


def _eval_poly(poly, names, bindings) -> Fraction:
    total = Fraction(0)
    for mono, coeff in poly.terms():
        term = _qq_to_fraction(coeff)
        for name, exp in zip(names, mono):
            if exp:
                term *= bindings[name] ** exp
        total += term
    return total


def normalize(s: Scalar) -> Scalar:
    """Return the canonical form of ``s``.

    Construction already canonicalizes, so this is the identity; it exists so
    canonical-form expectations are a named, testable operation (idempotent).
    """
    return s


def evaluate(s: Scalar, bindings: Mapping[str, Union[int, Fraction]]) -> Fraction:
    return s.evaluate(bindings)


def embed(s: Scalar, target: ParameterContext) -> Scalar:
    """Re-express a scalar in a context whose parameters contain its own."""
    if isinstance(s.raw, Fraction):
        return Scalar(target, s.raw)
    missing = s.params() - set(target.names)
    if missing:
        raise ScalarError(f"target context lacks parameters {sorted(missing)}")

    def poly_embed(poly):
        total = target.zero
        for mono, coeff in poly.terms():
            term = target.scalar(_qq_to_fraction(coeff))
            for name, exp in zip(s.ctx.names, mono):
                if exp:
                    term = term * target.param(name) ** exp
            total = total + term
        return total

    num = poly_embed(s.raw.numer)
    den = poly_embed(s.raw.denom)
    return num / den


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _mono_str(names, mono) -> str:
    pieces = []
    for name, exp in zip(names, mono):
        if exp == 1:
            pieces.append(name)
        elif exp > 1:
            pieces.append(f"{name}^{exp}")
    return "*".join(pieces)


def _poly_str(poly, names) -> str:
    if not poly:
        return "0"
    chunks = []
    for mono, coeff in poly.terms():
        c = _qq_to_fraction(coeff)
        m = _mono_str(names, mono)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not m:
            body = str(c)
        elif c == 1:
            body = m
        else:
            body = f"{c}*{m}"
        chunks.append((sign, body))
    first_sign, first_body = chunks[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def _render(s: Scalar) -> str:
    if isinstance(s.raw, Fraction):
        return str(s.raw)
    num, den = s.raw.numer, s.raw.denom
    names = s.ctx.names
    num_str = _poly_str(num, names)
    if den == s.ctx._field.ring.one:
        return num_str
    den_str = _poly_str(den, names)
    if len(num.terms()) > 1 or num_str.startswith("-"):
        num_str = f"({num_str})"
    if len(den.terms()) > 1 or "*" in den_str or "^" in den_str:
        den_str = f"({den_str})"
    return f"{num_str}/{den_str}"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class _Parser:
    """Recursive descent for: integers, fractions p/q, parameters, + - * / ^, parens."""

    def __init__(self, ctx: ParameterContext, text: str):
        self.ctx = ctx
        self.text = _fold_unicode(text)
        self.tokens = []
        self._tokenize()
        self.index = 0

    def _tokenize(self):
        pos = 0
        text = self.text
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                raise ScalarSyntaxError(
                    f"unexpected character {stripped[0]!r}", len(text) - len(stripped)
                )
            if m.group("num") is not None:
                self.tokens.append(("num", int(m.group("num")), m.start("num")))
            elif m.group("ident") is not None:
                self.tokens.append(("ident", m.group("ident"), m.start("ident")))
            else:
                self.tokens.append(("op", m.group("op"), m.start("op")))
            pos = m.end()

    def _peek(self):
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _next(self):
        tok = self._peek()
        if tok is None:
            raise ScalarSyntaxError("unexpected end of input", len(self.text))
        self.index += 1
        return tok

    def parse(self) -> Scalar:
        value = self._expr()
        tok = self._peek()
        if tok is not None:
            raise ScalarSyntaxError(f"trailing input {tok[1]!r}", tok[2])
        return value

    def _expr(self) -> Scalar:
        tok = self._peek()
        negate = False
        if tok and tok[:2] == ("op", "-"):
            self._next()
            negate = True
        elif tok and tok[:2] == ("op", "+"):
            self._next()
        value = self._term()
        if negate:
            value = -value
        while True:
            tok = self._peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self._next()
                rhs = self._term()
                value = value + rhs if tok[1] == "+" else value - rhs
            else:
                return value

    def _term(self) -> Scalar:
        value = self._factor()
        while True:
            tok = self._peek()
            if tok and tok[0] == "op" and tok[1] in "*/":
                self._next()
                rhs = self._factor()
                if tok[1] == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero:
                        raise ScalarSyntaxError("division by zero scalar", tok[2])
                    value = value / rhs
            else:
                return value

    def _factor(self) -> Scalar:
        tok = self._peek()
        if tok and tok[:2] == ("op", "-"):
            self._next()
            return -self._factor()
        base = self._atom()
        tok = self._peek()
        if tok and tok[:2] == ("op", "^"):
            self._next()
            exp_tok = self._next()
            sign = 1
            if exp_tok[:2] == ("op", "-"):
                sign = -1
                exp_tok = self._next()
            if exp_tok[0] != "num":
                raise ScalarSyntaxError("exponent must be an integer", exp_tok[2])
            exponent = sign * exp_tok[1]
            if exponent < 0 and base.is_zero:
                raise ScalarSyntaxError("division by zero scalar", exp_tok[2])
            return base ** exponent
        return base

    def _atom(self) -> Scalar:
        tok = self._next()
        kind, value, pos = tok
        if kind == "num":
            return self.ctx.scalar(value)
        if kind == "ident":
            if value not in self.ctx._gens:
                raise ScalarSyntaxError(f"unknown parameter {value!r}", pos)
            return self.ctx.param(value)
        if (kind, value) == ("op", "("):
            inner = self._expr()
            closing = self._next()
            if closing[:2] != ("op", ")"):
                raise ScalarSyntaxError("expected ')'", closing[2])
            return inner
        raise ScalarSyntaxError(f"unexpected token {value!r}", pos)
