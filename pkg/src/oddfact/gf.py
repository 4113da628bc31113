"""Exact arithmetic in GF(p^f) for odd primes p.

Elements are coefficient vectors on the polynomial basis 1, x, ..., x^(f-1)
modulo a fixed monic irreducible polynomial over GF(p).  Every element also
has an integer code sum(c_i * p^i) in range(q); the matrix layer stores codes
and uses the code-level tables built here, so scalar arithmetic stays cheap
without a symbolic layer.
"""

from __future__ import annotations

import functools

import numpy as np


class NonPrime(ValueError):
    pass


class EvenCharacteristic(ValueError):
    pass


class FieldMismatch(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class ZeroArgument(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- polynomial helpers over GF(p); polys are tuples of ints, low degree first,
#    no trailing zeros (the zero polynomial is ()).


def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _ptrim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                  for i in range(n))


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        factor = (a[-1] * inv_lead) % p
        q[shift] = factor
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * bi) % p
        while a and a[-1] == 0:
            a.pop()
    return _ptrim(q), _ptrim(a)


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pgcdext(a, b, p):
    # returns (g, s, t) with s*a + t*b = g
    r0, r1 = _ptrim(a), _ptrim(b)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pmul(tuple(-c % p for c in q), s1, p), p)
        t0, t1 = t1, _padd(t0, _pmul(tuple(-c % p for c in q), t1, p), p)
    return r0, s0, t0


def _irreducible(poly, p):
    """Trial factorization: monic poly of degree f has no monic factor of
    degree 1..f//2.  Desk scale (f <= 6)."""
    f = len(poly) - 1
    for deg in range(1, f // 2 + 1):
        for code in range(p ** deg):
            cand = _code_to_coeffs(code, p, deg) + (1,)
            if not _pmod(poly, cand, p):
                return False
    return True


def _code_to_coeffs(code, p, length):
    out = []
    for _ in range(length):
        out.append(code % p)
        code //= p
    return tuple(out)


def _coeffs_to_code(coeffs, p):
    code = 0
    for c in reversed(coeffs):
        code = code * p + c
    return code


class Field:
    """GF(p^f) with a fixed monic irreducible modulus.

    Immutable after construction; shared freely between threads.  Scalar
    arithmetic is exposed both on FieldElement and as code-level numpy
    tables (add_table, mul_table, ...) for the matrix layer.
    """

    def __init__(self, p, f, modulus):
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = tuple(int(c) % p for c in modulus)
        if len(self.modulus) != f + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if f > 1 and not _irreducible(self.modulus, p):
            raise ValueError("modulus is reducible")
        self._tables = None

    # -- structural

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.f, self.modulus) == (other.p, other.f, other.modulus))

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __repr__(self):
        return f"GF({self.q})"

    @property
    def zero(self):
        return FieldElement(self, (0,) * self.f)

    @property
    def one(self):
        return FieldElement(self, (1,) + (0,) * (self.f - 1))

    @property
    def gen(self):
        """The polynomial-basis element x (1 for prime fields)."""
        if self.f == 1:
            return self.one
        return FieldElement(self, (0, 1) + (0,) * (self.f - 2))

    def element(self, value):
        """Embed a small integer via the prime subfield (value mod p)."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element of a different field")
            return value
        return FieldElement(self, (int(value) % self.p,) + (0,) * (self.f - 1))

    def from_code(self, code):
        code = int(code)
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElement(self, _code_to_coeffs(code, self.p, self.f))

    def elements(self):
        return [self.from_code(c) for c in range(self.q)]

    # -- code-level arithmetic tables

    def _build_tables(self):
        q, p, f = self.q, self.p, self.f
        if f == 1:
            codes = np.arange(q, dtype=np.int64)
            add = (codes[:, None] + codes[None, :]) % p
            mul = (codes[:, None] * codes[None, :]) % p
            inv = np.zeros(q, dtype=np.int16)
            for a in range(1, q):
                inv[a] = pow(a, p - 2, p)
        else:
            coeffs = [_code_to_coeffs(c, p, f) for c in range(q)]
            add = np.zeros((q, q), dtype=np.int16)
            mul = np.zeros((q, q), dtype=np.int16)
            for a in range(q):
                for b in range(a, q):
                    s = _coeffs_to_code(tuple((x + y) % p for x, y in zip(coeffs[a], coeffs[b])), p)
                    add[a, b] = add[b, a] = s
                    m = _coeffs_to_code(_pmod(_pmul(coeffs[a], coeffs[b], p), self.modulus, p)
                                        + (0,) * f, p)
                    mul[a, b] = mul[b, a] = m
            inv = np.zeros(q, dtype=np.int16)
            for a in range(1, q):
                g, s, _ = _pgcdext(coeffs[a], self.modulus, p)
                lead = pow(g[0], p - 2, p)
                sc = _pmod(_pmul(s, (lead,), p), self.modulus, p)
                inv[a] = _coeffs_to_code(sc + (0,) * f, p)
        neg = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int16)
        self._tables = (add.astype(np.int16), mul.astype(np.int16), inv, neg)

    @property
    def add_table(self):
        if self._tables is None:
            self._build_tables()
        return self._tables[0]

    @property
    def mul_table(self):
        if self._tables is None:
            self._build_tables()
        return self._tables[1]

    @property
    def inv_table(self):
        if self._tables is None:
            self._build_tables()
        return self._tables[2]

    @property
    def neg_table(self):
        if self._tables is None:
            self._build_tables()
        return self._tables[3]

    def c_add(self, a, b):
        return int(self.add_table[a, b])

    def c_sub(self, a, b):
        return int(self.add_table[a, self.neg_table[b]])

    def c_mul(self, a, b):
        return int(self.mul_table[a, b])

    def c_neg(self, a):
        return int(self.neg_table[a])

    def c_inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.inv_table[a])

    # -- serialization ("GF p f c0 c1 ... cf", coefficients low to high)

    def header(self):
        return "GF " + " ".join(str(x) for x in (self.p, self.f) + self.modulus)

    @staticmethod
    def from_header(line):
        parts = line.split()
        if len(parts) < 4 or parts[0] != "GF":
            raise ValueError(f"bad field header: {line!r}")
        p, f = int(parts[1]), int(parts[2])
        modulus = tuple(int(x) for x in parts[3:])
        if len(modulus) != f + 1:
            raise ValueError(f"bad field header: {line!r}")
        fld = make_field(p, f)
        if fld.modulus != modulus:
            # a field with a non-canonical modulus is still a valid field
            fld = Field(p, f, modulus)
        return fld


class FieldElement:
    """Value-like element of a Field; equality is coefficient equality."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(int(c) % field.p for c in coeffs)
        if len(self.coeffs) != field.f:
            raise ValueError("wrong coefficient count")

    @property
    def code(self):
        return _coeffs_to_code(self.coeffs, self.field.p)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("elements of different fields")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, (-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        return F.from_code(F.c_mul(self.code, other.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero")
        F = self.field
        return F.from_code(F.c_mul(self.code, F.c_inv(other.code)))

    def __pow__(self, n):
        F = self.field
        if n < 0:
            if self.is_zero():
                raise DivisionByZero("inverse of zero")
            base = F.c_inv(self.code)
            n = -n
        else:
            base = self.code
        acc = F.one.code
        while n:
            if n & 1:
                acc = F.c_mul(acc, base)
            base = F.c_mul(base, base)
            n >>= 1
        return F.from_code(acc)

    def inverse(self):
        return self ** (-1)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return (isinstance(other, FieldElement)
                and self.field == other.field and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __repr__(self):
        if self.field.f == 1:
            return str(self.coeffs[0])
        return f"{list(self.coeffs)}@GF({self.field.q})"


@functools.lru_cache(maxsize=None)
def make_field(p, f):
    """GF(p^f) with the deterministic modulus.

    f=1 uses the polynomial x (prime-field convention); f>1 uses the monic
    irreducible of degree f whose coefficient code is least.
    """
    p, f = int(p), int(f)
    if not _is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is out of scope")
    if f < 1:
        raise ValueError("degree must be >= 1")
    if f == 1:
        return Field(p, 1, (0, 1))
    for code in range(p ** f):
        cand = _code_to_coeffs(code, p, f) + (1,)
        if _irreducible(cand, p):
            return Field(p, f, cand)
    raise RuntimeError("unreachable: irreducible polynomial exists for every degree")


def is_square(a):
    """True iff a is a nonzero square, by a^((q-1)/2) = 1."""
    if not isinstance(a, FieldElement):
        raise TypeError("is_square expects a FieldElement")
    if a.is_zero():
        raise ZeroArgument("is_square(0) is undefined")
    q = a.field.q
    return a ** ((q - 1) // 2) == a.field.one


def nonsquare(field):
    """Least nonsquare in code order."""
    for code in range(1, field.q):
        el = field.from_code(code)
        if not is_square(el):
            return el
    raise RuntimeError("every field of odd order has a nonsquare")


def frobenius(a):
    return a ** a.field.p
