"""Exact arithmetic in small finite fields GF(p^r).

Elements are stored as integer codes in range(p**r): the code of
c_0 + c_1*g + ... + c_{r-1}*g^{r-1} is c_0 + c_1*p + ... + c_{r-1}*p^{r-1},
where g is the class of x modulo a fixed irreducible modulus of degree r.
The modulus is the lexicographically smallest monic irreducible polynomial
of degree r (smallest integer code), so arithmetic is deterministic per
(p, r).  Multiplication uses discrete-log tables built from a fixed
primitive element; addition is an XOR for p == 2 and a digit table
otherwise.

GF(p^a) embeds into GF(p^b) whenever a divides b; the embedding sends the
degree-a generator to the smallest root of its modulus in the big field,
again deterministic.
"""

from __future__ import annotations

import functools
import itertools

_LOG_TABLE_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- polynomial arithmetic over the prime field F_p, coefficient lists low->high --

def _pp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pp_trim(out)


def _pp_mod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - df
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - lead * fi) % p
        a.pop()
    return _pp_trim(a)


def _pp_powmod(a, e, f, p):
    result = [1]
    base = _pp_mod(a, f, p)
    while e:
        if e & 1:
            result = _pp_mod(_pp_mul(result, base, p), f, p)
        base = _pp_mod(_pp_mul(base, base, p), f, p)
        e >>= 1
    return result


def _pp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pp_mod(a, b, p)
        b = list(b)
    return a


def _is_irreducible(f, p):
    """Monic f of degree r over F_p, via the Frobenius criterion."""
    r = len(f) - 1
    x = [0, 1]
    xqr = _pp_powmod(x, p**r, f, p)
    if _pp_trim([(a - b) % p for a, b in itertools.zip_longest(xqr, x, fillvalue=0)]):
        return False
    for ell in _prime_factors(r):
        xq = _pp_powmod(x, p ** (r // ell), f, p)
        diff = _pp_trim([(a - b) % p for a, b in itertools.zip_longest(xq, x, fillvalue=0)])
        g = _pp_gcd(f, diff, p)
        if len(g) - 1 > 0:
            return False
    return True


@functools.lru_cache(maxsize=None)
def _find_modulus(p: int, r: int) -> tuple[int, ...]:
    """Smallest-code monic irreducible of degree r over F_p."""
    if r == 1:
        return (0, 1)
    for code in range(p**r):
        coeffs = []
        c = code
        for _ in range(r):
            coeffs.append(c % p)
            c //= p
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class GF:
    """The field GF(p^r) acting on integer element codes."""

    def __init__(self, p: int, r: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.r = r
        self.q = p**r
        if self.q > _LOG_TABLE_LIMIT:
            raise ValueError(f"field size {self.q} exceeds supported limit")
        self.modulus = _find_modulus(p, r)
        self._build_tables()

    def _build_tables(self):
        p, q = self.p, self.q
        if p == 2:
            self._add = None  # use XOR
        elif q <= 256:
            add = [[0] * q for _ in range(q)]
            for a in range(q):
                for b in range(a, q):
                    s = self._add_digitwise(a, b)
                    add[a][b] = s
                    add[b][a] = s
            self._add = add
        else:
            self._add = False  # digitwise on demand
        # discrete log tables from the smallest primitive element
        gen = self._find_generator()
        exp = [1] * (2 * q)
        log = [0] * q
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            log[acc] = i
            acc = self._mul_poly(acc, gen)
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log
        self.generator = gen

    def _add_digitwise(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        while a or b:
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def _mul_poly(self, a: int, b: int) -> int:
        """Schoolbook product of codes, reduced by the modulus."""
        p, r = self.p, self.r
        da = []
        while a:
            da.append(a % p)
            a //= p
        db = []
        while b:
            db.append(b % p)
            b //= p
        prod = [0] * (len(da) + len(db) - 1) if da and db else []
        for i, ai in enumerate(da):
            for j, bj in enumerate(db):
                prod[i + j] = (prod[i + j] + ai * bj) % p
        prod = _pp_mod(prod, list(self.modulus), p)
        out = 0
        for c in reversed(prod):
            out = out * p + c
        return out

    def _find_generator(self) -> int:
        q = self.q
        factors = _prime_factors(q - 1)
        for cand in range(2, q):
            if all(self._pow_poly(cand, (q - 1) // ell) != 1 for ell in factors):
                return cand
        if q == 2:
            return 1
        raise AssertionError("no generator found")

    def _pow_poly(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return result

    # -- public code-level arithmetic --

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add:
            return self._add[a][b]
        return self._add_digitwise(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        out = 0
        mult = 1
        while a:
            d = a % p
            out += ((p - d) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF")
        return self._exp[(self.q - 1) - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero in GF")
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Embed an integer via reduction mod p."""
        return n % self.p

    def coeffs(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.r):
            out.append(a % p)
            a //= p
        return tuple(out)

    def elements(self):
        return range(self.q)

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.r) == (other.p, other.r)

    def __hash__(self):
        return hash((self.p, self.r))

    def __repr__(self):
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"


@functools.lru_cache(maxsize=None)
def gf(p: int, r: int = 1) -> GF:
    return GF(p, r)


@functools.lru_cache(maxsize=None)
def _embedding_root(p: int, r_small: int, r_big: int) -> int:
    """Smallest code in GF(p^r_big) that is a root of the degree-r_small modulus."""
    small = gf(p, r_small)
    big = gf(p, r_big)
    mod = small.modulus
    for cand in range(big.q):
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, cand), c % p)
        if acc == 0:
            return cand
    raise AssertionError("no embedding root; degrees incompatible?")


def embed_code(code: int, small: GF, big: GF) -> int:
    """Image of a GF(p^a) code in GF(p^b), a | b."""
    if small == big:
        return code
    if small.p != big.p or big.r % small.r != 0:
        raise ValueError(f"no embedding {small} -> {big}")
    root = _embedding_root(small.p, small.r, big.r)
    acc = 0
    for c in reversed(small.coeffs(code)):
        acc = big.add(big.mul(acc, root), c)
    return acc


class FiniteFieldElem:
    """An element of GF(p^r): a coefficient vector over F_p packed as a code."""

    __slots__ = ("field", "code")

    def __init__(self, field: GF, code: int):
        self.field = field
        self.code = code % field.q

    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _coerce(self, other):
        if isinstance(other, FiniteFieldElem):
            if other.field == self.field:
                return other.code
            if other.field.p == self.field.p:
                if self.field.r % other.field.r == 0:
                    return embed_code(other.code, other.field, self.field)
            raise ValueError(f"cannot mix {self.field} and {other.field}")
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FiniteFieldElem(self.field, self.field.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FiniteFieldElem(self.field, self.field.sub(self.code, c))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FiniteFieldElem(self.field, self.field.sub(c, self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FiniteFieldElem(self.field, self.field.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FiniteFieldElem(self.field, self.field.div(self.code, c))

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FiniteFieldElem(self.field, self.field.div(c, self.code))

    def __neg__(self):
        return FiniteFieldElem(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FiniteFieldElem(self.field, self.field.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        if isinstance(other, FiniteFieldElem):
            try:
                return self.code == self._coerce(other)
            except ValueError:
                return False
        return NotImplemented

    def __bool__(self):
        return self.code != 0

    def __hash__(self):
        return hash((self.field.p, self.code))

    def __repr__(self):
        if self.field.r == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.coeffs()):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                gpow = "g" if i == 1 else f"g^{i}"
                terms.append(gpow if c == 1 else f"{c}*{gpow}")
        return " + ".join(terms) if terms else "0"
