"""Reduced rational functions and the expression grammar.

Grammar (``^`` takes an integer exponent and binds tighter than unary minus)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary | <implicit product> unary)*
    unary   := ('+' | '-') unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := NUMBER ['i'] | 'i' | 'z' | '(' expr ')'

Numbers accept decimals and exponents (``1.5e-3``); ``2i`` is an imaginary
literal; juxtaposition such as ``2z`` or ``(z+1)(z-1)`` means a product.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import PoleError, ValidationError
from .poly import GCD_CUTOFF, Polynomial, poly_gcd

__all__ = ["RationalFn", "ParseError", "parse_rational", "format_rational", "format_poly"]

_ONE = Polynomial((1,))


@dataclass(frozen=True)
class RationalFn:
    """``num/den`` kept in reduced form with a monic denominator."""

    num: Polynomial
    den: Polynomial = _ONE

    def __post_init__(self):
        num = self.num if isinstance(self.num, Polynomial) else Polynomial(self.num)
        den = self.den if isinstance(self.den, Polynomial) else Polynomial(self.den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            num, den = Polynomial(), _ONE
        elif den.degree >= 1 and num.degree >= 0:
            g = poly_gcd(num, den, GCD_CUTOFF)
            if g.degree >= 1:
                num, den = num // g, den // g
        lead = den.lead
        if lead != 1:
            num, den = num / lead, den / lead
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def constant(cls, c: complex) -> "RationalFn":
        return cls(Polynomial((c,)))

    @classmethod
    def z(cls) -> "RationalFn":
        return cls(Polynomial((0, 1)))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        d = self.den(z)
        if np.any(d == 0):
            bad = np.atleast_1d(z)[np.atleast_1d(d) == 0][0]
            raise PoleError(f"pole of {format_rational(self)} at z={complex(bad)}")
        return self.num(z) / d

    def _co(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, Polynomial):
            return RationalFn(other)
        if isinstance(other, (int, float, complex, np.number)):
            return RationalFn.constant(other)
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        if o.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        return RationalFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._co(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return RationalFn(self.num**n, self.den**n)
        if self.is_zero:
            raise ZeroDivisionError("negative power of zero")
        return RationalFn(self.den ** (-n), self.num ** (-n))

    def conj(self) -> "RationalFn":
        return RationalFn(self.num.conj(), self.den.conj())

    def allclose(self, other: "RationalFn", tol: float = 1e-10) -> bool:
        return self.num.allclose(other.num, tol) and self.den.allclose(other.den, tol)

    def __str__(self):
        return format_rational(self)


# --------------------------------------------------------------------------
# printer


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _fmt_complex(c: complex) -> tuple[str, bool]:
    """Return (text, needs_parens_when_multiplied)."""
    re_, im = c.real, c.imag
    if im == 0:
        return _fmt_real(re_), re_ < 0
    if re_ == 0:
        if abs(im) == 1:
            return ("i" if im > 0 else "-i"), im < 0
        return _fmt_real(im) + "i", im < 0
    sign = "+" if im >= 0 else "-"
    return f"({_fmt_real(re_)}{sign}{_fmt_real(abs(im))}i)", False


def format_poly(p: Polynomial, var: str = "z") -> str:
    """Polynomial in the expression grammar, highest power first."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        neg = False
        # pull a leading minus out of purely real / purely imaginary coefficients
        if (c.imag == 0 and c.real < 0) or (c.real == 0 and c.imag < 0):
            neg, c = True, -c
        txt, _ = _fmt_complex(c)
        if mono:
            if c == 1:
                term = mono
            else:
                term = f"{txt}*{mono}"
        else:
            term = txt
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append((" - " if neg else " + ") + term)
    return "".join(parts)


def format_rational(r: RationalFn) -> str:
    n = format_poly(r.num)
    if r.den.degree == 0 and r.den.coeffs == (1,):
        return n
    d = format_poly(r.den)
    # a bare monic monomial such as z or z^3 needs no parentheses
    if not (sum(1 for c in r.den.coeffs if c != 0) == 1 and r.den.lead == 1):
        d = f"({d})"
    if len([c for c in r.num.coeffs if c != 0]) == 1 and r.num.degree == 0:
        return f"{n}/{d}"
    return f"({n})/{d}"


# --------------------------------------------------------------------------
# parser


class ParseError(ValidationError):
    """Syntax error with the offending position and the expected tokens."""

    def __init__(self, message: str, position: int, expected: set[str] | frozenset[str] = frozenset()):
        self.position = position
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{message} at position {position}" + (f" (expected one of: {exp})" if exp else ""))


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<sym>[zi])|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, {"number", "z", "i", "(", "operator"})
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


_ATOM_START = frozenset({"number", "z", "i", "("})


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def starts_atom(self, tok) -> bool:
        kind, val, _ = tok
        return kind in ("num", "sym") or (kind == "op" and val == "(")

    def parse(self) -> RationalFn:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, _ATOM_START | {"+", "-"})
        r = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, {"+", "-", "*", "/", "^", "end of input"})
        return r

    def expr(self) -> RationalFn:
        r = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                r = r + rhs if val == "+" else r - rhs
            else:
                return r

    def term(self) -> RationalFn:
        r = self.unary()
        while True:
            tok = self.peek()
            kind, val, pos = tok
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                if val == "*":
                    r = r * rhs
                else:
                    if rhs.is_zero:
                        raise ParseError("division by the zero polynomial", pos, set())
                    r = r / rhs
            elif self.starts_atom(tok):
                r = r * self.power()
            else:
                return r

    def unary(self) -> RationalFn:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self) -> RationalFn:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            k2, v2, p2 = self.peek()
            if k2 == "op" and v2 == "-":
                self.take()
                sign = -1
                k2, v2, p2 = self.peek()
            if k2 != "num" or not re.fullmatch(r"\d+", v2):
                raise ParseError("exponent must be an integer", p2, {"integer"})
            self.take()
            n = sign * int(v2)
            if n < 0 and base.is_zero:
                raise ParseError("negative power of zero", pos, set())
            return base**n
        return base

    def atom(self) -> RationalFn:
        kind, val, pos = self.take()
        if kind == "num":
            x = float(val)
            if not math.isfinite(x):
                raise ParseError("number out of range", pos, set())
            k2, v2, _ = self.peek()
            if k2 == "sym" and v2 == "i":
                self.take()
                return RationalFn.constant(1j * x)
            return RationalFn.constant(x)
        if kind == "sym":
            return RationalFn.constant(1j) if val == "i" else RationalFn.z()
        if kind == "op" and val == "(":
            r = self.expr()
            k2, v2, p2 = self.take()
            if not (k2 == "op" and v2 == ")"):
                raise ParseError(f"unexpected {v2!r}" if k2 != "end" else "unexpected end of input", p2, {")"})
            return r
        if kind == "end":
            raise ParseError("unexpected end of input", pos, _ATOM_START)
        raise ParseError(f"unexpected {val!r}", pos, _ATOM_START)


def parse_rational(text: str) -> RationalFn:
    """Parse an expression in ``z`` into a reduced :class:`RationalFn`."""
    if not isinstance(text, str):
        raise ValidationError("expression must be a string")
    return _Parser(text).parse()
