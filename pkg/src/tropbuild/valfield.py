"""Exact scalars of the valued fields GF(p^r)(t^(1/m)).

A scalar is a reduced fraction num/den of polynomials in s = t^(1/m) with
coefficients in GF(p^r); the denominator is monic and coprime to the
numerator, so every value has one canonical representation per stated
ramification m.  The additive valuation is normalized by v(t) = 1, hence
v(s) = 1/m, and v(0) = +infinity (math.inf).  These fields are complete
discretely-valued fields with finite residue field once m is fixed, which
is all the downstream geometry consumes; no approximation enters anywhere.

Mixing values with different ramifications (m | m') or residue degrees
(r | r') silently lifts both operands to the common refinement.  The
stated ramification is never reduced automatically; ``reduce_ramification``
does that on demand.

Text grammar (``parse_scalar`` / ``str``): a scalar is a sum of terms
``c*t^(a/b)`` or a quotient ``P/Q`` of two parenthesized sums.  For r > 1
the symbol ``g`` (a fixed generator of GF(p^r), powers written ``g^k``)
may appear in coefficients; plain integer coefficients are reduced mod p.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from math import inf

from .gfield import GF, FiniteFieldElem, embed_code, gf

INFINITY = inf


class NonUnitResidue(ArithmeticError):
    """Residue requested for a nonzero scalar of nonzero valuation."""


class RamificationError(ValueError):
    """Ramification bound exceeded or incompatible ramifications."""


RAMIFICATION_BOUND = 64


# -- polynomials in s over GF, stored as tuples of codes, low degree first --

def _trim(c: list[int]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def poly_add(F: GF, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, bi in enumerate(b):
        out[i] = F.add(out[i], bi)
    return _trim(out)


def poly_neg(F: GF, a):
    return tuple(F.neg(c) for c in a)


def poly_sub(F: GF, a, b):
    return poly_add(F, a, poly_neg(F, b))


def poly_mul(F: GF, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return _trim(out)


def poly_divmod(F: GF, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    ilead = F.inv(lead)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        c = F.mul(a[-1], ilead)
        shift = len(a) - 1 - db
        if c:
            q[shift] = c
            for i, bi in enumerate(b):
                a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
        a.pop()
    return _trim(q), _trim(a)


def poly_gcd(F: GF, a, b):
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    if a:
        ilead = F.inv(a[-1])
        a = tuple(F.mul(c, ilead) for c in a)
    return a


def poly_order(a) -> int:
    """Order of vanishing at s = 0."""
    for i, c in enumerate(a):
        if c:
            return i
    raise ValueError("zero polynomial has no order")


def _poly_embed(a, small: GF, big: GF):
    if small == big:
        return a
    return tuple(embed_code(c, small, big) for c in a)


def _poly_stretch(a, k: int):
    """Substitute s -> s^k."""
    if k == 1 or not a:
        return tuple(a)
    out = [0] * ((len(a) - 1) * k + 1)
    for i, c in enumerate(a):
        out[i * k] = c
    return tuple(out)


class PuiseuxRational:
    """An element of GF(p^r)(t^(1/m)) in canonical reduced form."""

    __slots__ = ("field", "m", "num", "den")

    def __init__(self, field: GF, m: int, num, den=(1,), *, _canonical=False):
        if m < 1 or m > RAMIFICATION_BOUND:
            raise RamificationError(f"ramification {m} outside [1, {RAMIFICATION_BOUND}]")
        self.field = field
        self.m = m
        if _canonical:
            self.num, self.den = num, den
            return
        num = _trim(list(num))
        den = _trim(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (1,)
            return
        g = poly_gcd(field, num, den)
        if len(g) > 1:
            num = poly_divmod(field, num, g)[0]
            den = poly_divmod(field, den, g)[0]
        ilead = field.inv(den[-1])
        if den[-1] != 1:
            num = tuple(field.mul(c, ilead) for c in num)
            den = tuple(field.mul(c, ilead) for c in den)
        self.num, self.den = num, den

    # -- constructors --

    @staticmethod
    def zero(field: GF, m: int = 1) -> "PuiseuxRational":
        return PuiseuxRational(field, m, (), (1,), _canonical=True)

    @staticmethod
    def one(field: GF, m: int = 1) -> "PuiseuxRational":
        return PuiseuxRational(field, m, (1,), (1,), _canonical=True)

    @staticmethod
    def from_const(c: FiniteFieldElem, m: int = 1) -> "PuiseuxRational":
        if c.code == 0:
            return PuiseuxRational.zero(c.field, m)
        return PuiseuxRational(c.field, m, (c.code,), (1,), _canonical=True)

    @staticmethod
    def t_power(field: GF, exponent, m: int | None = None) -> "PuiseuxRational":
        """The monomial t^exponent; denominator of the exponent sets m."""
        e = Fraction(exponent)
        mm = e.denominator if m is None else m
        if (e * mm).denominator != 1:
            raise RamificationError(f"exponent {e} needs ramification {e.denominator}, got {mm}")
        k = int(e * mm)
        if k >= 0:
            return PuiseuxRational(field, mm, (0,) * k + (1,), (1,), _canonical=True)
        return PuiseuxRational(field, mm, (1,), (0,) * (-k) + (1,), _canonical=True)

    # -- coercion: lift (r, m) to common refinements --

    def lift(self, field: GF | None = None, m: int | None = None) -> "PuiseuxRational":
        field = field or self.field
        m = m or self.m
        if field == self.field and m == self.m:
            return self
        if field.p != self.field.p or field.r % self.field.r:
            raise ValueError(f"cannot lift {self.field} into {field}")
        if m % self.m:
            raise RamificationError(f"{m} is not a multiple of ramification {self.m}")
        k = m // self.m
        num = _poly_stretch(_poly_embed(self.num, self.field, field), k)
        den = _poly_stretch(_poly_embed(self.den, self.field, field), k)
        return PuiseuxRational(field, m, num, den, _canonical=True)

    def _pair(self, other):
        if isinstance(other, int):
            other = PuiseuxRational.from_const(FiniteFieldElem(self.field, self.field.from_int(other)), self.m)
        elif isinstance(other, FiniteFieldElem):
            other = PuiseuxRational.from_const(other, self.m)
        elif not isinstance(other, PuiseuxRational):
            return None, None
        if self.field.p != other.field.p:
            raise ValueError("mixing different characteristics")
        r = max(self.field.r, other.field.r)
        if r % self.field.r or r % other.field.r:
            r = self.field.r * other.field.r  # common multiple fallback
        field = gf(self.field.p, r)
        m = self.m * other.m // math.gcd(self.m, other.m)
        return self.lift(field, m), other.lift(field, m)

    # -- arithmetic --

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        F = a.field
        num = poly_add(F, poly_mul(F, a.num, b.den), poly_mul(F, b.num, a.den))
        return PuiseuxRational(F, a.m, num, poly_mul(F, a.den, b.den))

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxRational(self.field, self.m, poly_neg(self.field, self.num), self.den, _canonical=True)

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        F = a.field
        return PuiseuxRational(F, a.m, poly_mul(F, a.num, b.num), poly_mul(F, a.den, b.den))

    __rmul__ = __mul__

    def inverse(self) -> "PuiseuxRational":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        F = self.field
        num, den = self.den, self.num
        ilead = F.inv(den[-1])
        if den[-1] != 1:
            num = tuple(F.mul(c, ilead) for c in num)
            den = tuple(F.mul(c, ilead) for c in den)
        return PuiseuxRational(F, self.m, num, den, _canonical=True)

    def __truediv__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = PuiseuxRational.one(self.field, self.m)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, FiniteFieldElem, PuiseuxRational)):
            a, b = self._pair(other)
            return a.num == b.num and a.den == b.den
        return NotImplemented

    def __hash__(self):
        red = self.reduce_ramification()
        return hash((red.field.p, red.field.r, red.m, red.num, red.den))

    # -- valuation theory --

    def valuation(self):
        """v(num)/m - v(den)/m; +inf for zero.  v(t) = 1."""
        if not self.num:
            return INFINITY
        return Fraction(poly_order(self.num) - poly_order(self.den), self.m)

    def residue(self) -> FiniteFieldElem:
        """Leading coefficient of self / t^valuation; requires v = 0 or self = 0."""
        if not self.num:
            return FiniteFieldElem(self.field, 0)
        on, od = poly_order(self.num), poly_order(self.den)
        if on != od:
            raise NonUnitResidue(f"valuation {Fraction(on - od, self.m)} != 0")
        return FiniteFieldElem(self.field, self.field.div(self.num[on], self.den[od]))

    def rescale_ramification(self, m2: int) -> "PuiseuxRational":
        """Reinterpret inside GF(p^r)(t^(1/m2)) for m | m2."""
        if m2 % self.m:
            raise RamificationError(f"{m2} is not a multiple of {self.m}")
        return self.lift(m=m2)

    def reduce_ramification(self) -> "PuiseuxRational":
        """Smallest ramification representing the same scalar."""
        g = self.m
        for poly in (self.num, self.den):
            for i, c in enumerate(poly):
                if c:
                    g = math.gcd(g, i)
                if g == 1:
                    break
            if g == 1:
                break
        if g == 1:
            return self
        num = tuple(self.num[i] for i in range(0, len(self.num), g))
        den = tuple(self.den[i] for i in range(0, len(self.den), g))
        return PuiseuxRational(self.field, self.m // g, num, den, _canonical=True)

    def is_ramification_one(self) -> bool:
        return self.reduce_ramification().m == 1

    # -- printing --

    def _poly_str(self, poly) -> str:
        F = self.field
        terms = []
        for i, c in enumerate(poly):
            if not c:
                continue
            e = Fraction(i, self.m)
            coeff = FiniteFieldElem(F, c)
            if F.r == 1:
                cs = str(c)
            else:
                cs = repr(coeff)
                if "+" in cs or "*" in cs:
                    cs = f"({cs})"
            if e == 0:
                terms.append(cs)
                continue
            tpow = "t" if e == 1 else (f"t^{e}" if e.denominator == 1 else f"t^({e})")
            terms.append(tpow if cs == "1" else f"{cs}*{tpow}")
        return " + ".join(terms) if terms else "0"

    def __str__(self):
        if self.den == (1,):
            return self._poly_str(self.num)
        return f"({self._poly_str(self.num)})/({self._poly_str(self.den)})"

    def __repr__(self):
        return f"PuiseuxRational({self.field!r}, {self})"


def field_arith(op: str, a: PuiseuxRational, b: PuiseuxRational | None = None) -> PuiseuxRational:
    """Named dispatcher over the exact field operations."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


def valuation(a: PuiseuxRational):
    return a.valuation()


def residue(a: PuiseuxRational) -> FiniteFieldElem:
    return a.residue()


def rescale_ramification(a: PuiseuxRational, m2: int) -> PuiseuxRational:
    return a.rescale_ramification(m2)


# -- scalar grammar --

_TOKEN = re.compile(r"\s*(\d+|[gt]|\^|\(|\)|[+\-*/])")

_FIELD_HEADER = re.compile(r"^GF\((\d+)(?:\^(\d+))?\)$")


def parse_field(header: str) -> GF:
    """Parse a 'GF(p^r)' header."""
    mt = _FIELD_HEADER.match(header.strip())
    if not mt:
        raise ValueError(f"bad field header {header!r}")
    return gf(int(mt.group(1)), int(mt.group(2) or 1))


def format_field(field: GF) -> str:
    return f"GF({field.p}^{field.r})" if field.r > 1 else f"GF({field.p})"


class _Parser:
    def __init__(self, text: str, field: GF, m: int):
        self.toks = _TOKEN.findall(text)
        if "".join(_TOKEN.findall(text)) != re.sub(r"\s+", "", text):
            raise ValueError(f"unparseable scalar {text!r}")
        self.pos = 0
        self.field = field
        self.m = m

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, tok=None):
        got = self.peek()
        if got is None or (tok is not None and got != tok):
            raise ValueError(f"expected {tok!r}, got {got!r}")
        self.pos += 1
        return got

    def parse_scalar(self) -> PuiseuxRational:
        a = self.parse_sum()
        if self.peek() == "/":
            self.take("/")
            b = self.parse_sum()
            a = a / b
        if self.peek() is not None:
            raise ValueError(f"trailing tokens at {self.toks[self.pos:]}")
        return a

    def parse_sum(self) -> PuiseuxRational:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        total = self.parse_term()
        if sign < 0:
            total = -total
        while self.peek() in ("+", "-"):
            neg = self.take() == "-"
            term = self.parse_term()
            total = total - term if neg else total + term
        return total

    def parse_term(self) -> PuiseuxRational:
        F = self.field
        coeff = FiniteFieldElem(F, 1)
        factors = []
        tpow = Fraction(0)
        seen = False
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                continue
            if tok == "(":
                self.take("(")
                factors.append(self.parse_sum())
                self.take(")")
                seen = True
                continue
            if tok is not None and tok.isdigit():
                self.take()
                coeff = coeff * FiniteFieldElem(F, F.from_int(int(tok)))
                seen = True
                continue
            if tok == "g":
                self.take()
                e = 1
                if self.peek() == "^":
                    self.take()
                    e = int(self.take())
                if F.r == 1:
                    raise ValueError("generator symbol g needs r > 1")
                coeff = coeff * (FiniteFieldElem(F, F.generator) ** e)
                seen = True
                continue
            if tok == "t":
                self.take()
                e = Fraction(1)
                if self.peek() == "^":
                    self.take()
                    e = self._exponent()
                tpow += e
                seen = True
                continue
            break
        if not seen:
            raise ValueError(f"empty term at {self.toks[self.pos:]}")
        out = PuiseuxRational.from_const(coeff, self.m)
        for f in factors:
            out = out * f
        if tpow:
            out = out * PuiseuxRational.t_power(self.field, tpow, self._lcm(self.m, tpow.denominator))
        return out

    @staticmethod
    def _lcm(a, b):
        return a * b // math.gcd(a, b)

    def _exponent(self) -> Fraction:
        if self.peek() == "(":
            self.take("(")
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            a = int(self.take())
            b = 1
            if self.peek() == "/":
                self.take("/")
                b = int(self.take())
            self.take(")")
            return Fraction(sign * a, b)
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        return Fraction(sign * int(self.take()))


def parse_scalar(text: str, field: GF, m: int = 1) -> PuiseuxRational:
    """Parse the scalar grammar; the result carries ramification lcm(m, seen)."""
    return _Parser(text, field, m).parse_scalar()
