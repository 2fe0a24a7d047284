"""Finite fields GF(p^m) with a fixed polynomial-basis integer encoding.

An element ``sum c_i x^i`` (coefficients in GF(p), ``x`` the class of the
generator modulo the field's modulus) is encoded as the integer
``sum c_i p^i`` in ``[0, q)``.  All vectorized operations work on numpy
integer arrays holding such encodings.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_ORDER = 2 ** 20
TABLE_LIMIT = 2 ** 16


class FieldMismatchError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` into ``(p, m)`` with ``q == p**m``; raise if not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, m


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p), coefficient lists with the constant term first --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _monic_polys(degree: int, p: int):
    for low in range(p ** degree):
        coeffs = [(low // p ** i) % p for i in range(degree)]
        yield coeffs + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(_trim(list(poly))) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(d, p):
            if not _poly_mod(poly, g, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> list[int]:
    """Monic irreducible of degree ``m`` whose lower coefficients, read as a
    base-``p`` integer ``c0 + c1 p + ...``, are smallest."""
    for cand in _monic_polys(m, p):
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FiniteField:
    """GF(p^m).  Build instances with :func:`field_new`."""

    def __init__(self, p: int, m: int, modulus: list[int]):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = tuple(modulus)
        self._pows = np.array([p ** i for i in range(m)], dtype=np.int64)
        self._exp = self._log = None
        if self.q <= TABLE_LIMIT:
            self._build_tables()

    # -- encoding ---------------------------------------------------------

    def to_coeffs(self, a: int) -> list[int]:
        a = int(a)
        return [(a // self.p ** i) % self.p for i in range(self.m)]

    def from_coeffs(self, coeffs) -> int:
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.m:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def header(self) -> str:
        return f"field p={self.p} m={self.m} mod={','.join(map(str, self.modulus))}"

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.q)]

    # -- scalar schoolbook arithmetic -------------------------------------

    def _mul_scalar(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_coeffs(_poly_mod(prod, list(self.modulus), self.p))

    def _pow_scalar(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_scalar(result, base)
            base = self._mul_scalar(base, base)
            e >>= 1
        return result

    def _build_tables(self):
        q = self.q
        order = q - 1
        factors = _prime_factors(order) if order > 1 else []
        gen = next(g for g in range(1, q)
                   if all(self._pow_scalar(g, order // f) != 1 for f in factors))
        exp = np.zeros(2 * order + 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._mul_scalar(x, gen)
        exp[order:2 * order] = exp[:order]
        exp[2 * order] = exp[0]
        self.generator = gen
        self._exp, self._log = exp, log

    # -- vectorized arithmetic on encodings -------------------------------

    def _digits_op(self, a, b, sign):
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pw in self._pows:
            da = (a // pw) % self.p
            db = (b // pw) % self.p
            out += ((da + sign * db) % self.p) * pw
        return out

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        return self._digits_op(a, b, 1)

    def sub(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a - b) % self.p
        return self._digits_op(a, b, -1)

    def neg(self, a):
        return self.sub(np.zeros_like(np.asarray(a, dtype=np.int64)), a)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a * b % self.p
        if self._exp is not None:
            r = self._exp[self._log[a] + self._log[b]]
            return np.where((a == 0) | (b == 0), 0, r)
        return np.vectorize(self._mul_scalar, otypes=[np.int64])(a, b)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return np.vectorize(lambda x: self._pow_scalar(int(x), self.q - 2), otypes=[np.int64])(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e < 0:
            return self.power(self.inv(a), -e)
        if e == 0:
            return np.ones_like(a)
        if self._exp is not None:
            r = self._exp[(self._log[a] * e) % (self.q - 1)]
            return np.where(a == 0, 0, r)
        return np.vectorize(lambda x: self._pow_scalar(int(x), e), otypes=[np.int64])(a)

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        if self.m == 1:
            # entries < 2^20, so partial sums stay far below 2^63 for any sane inner size
            return (A @ B) % self.p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for i in range(A.shape[1]):
            col = A[:, i]
            if col.any():
                out = self.add(out, self.mul(col[:, None], B[i][None, :]))
        return out

    def random(self, shape, rng: np.random.Generator):
        return rng.integers(0, self.q, size=shape, dtype=np.int64)


class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        value = int(value)
        if not 0 <= value < field.q:
            raise ValueError(f"{value} is not an element encoding of {field!r}")
        self.field = field
        self.value = value

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return FieldElement(self.field, other).value
        return NotImplemented

    def _wrap(self, v) -> "FieldElement":
        return FieldElement(self.field, int(v))

    def __add__(self, other):
        return self._wrap(self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return self._wrap(self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return self._wrap(self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.power(self.value, e))

    def inv(self) -> "FieldElement":
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.field!r}({self.value})"


@lru_cache(maxsize=None)
def field_new(p: int, m: int = 1) -> FiniteField:
    """The field GF(p^m) with the smallest irreducible modulus (see
    :func:`smallest_irreducible`).  Fields are cached, so equal arguments give
    the same object."""
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** m > MAX_ORDER:
        raise ValueError(f"GF({p}^{m}) exceeds the supported order 2^20")
    return FiniteField(p, m, smallest_irreducible(p, m))


def gf(q: int) -> FiniteField:
    """Shorthand: the field with ``q`` elements."""
    return field_new(*prime_power(q))


def parse_field_header(line: str) -> FiniteField:
    """Inverse of :meth:`FiniteField.header`.  The modulus must match the
    deterministic choice, since all arithmetic is defined relative to it."""
    parts = line.split()
    if not parts or parts[0] != "field":
        raise ValueError(f"expected a 'field' header, got {line!r}")
    kv = {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise ValueError(f"malformed field token {tok!r}")
        k, v = tok.split("=", 1)
        kv[k] = v
    for key in ("p", "m", "mod"):
        if key not in kv:
            raise ValueError(f"field header missing key {key!r}")
    unknown = set(kv) - {"p", "m", "mod"}
    if unknown:
        raise ValueError(f"field header has unknown key {sorted(unknown)[0]!r}")
    parsed = {}
    for key in ("p", "m"):
        try:
            parsed[key] = int(kv[key])
        except ValueError:
            raise ValueError(f"field header key {key!r}: not an integer: {kv[key]!r}") from None
    try:
        mod = tuple(int(c) for c in kv["mod"].split(","))
    except ValueError:
        raise ValueError(f"field header key 'mod': malformed coefficient list {kv['mod']!r}") from None
    try:
        F = field_new(parsed["p"], parsed["m"])
    except ValueError as exc:
        raise ValueError(f"field header key 'p'/'m': {exc}") from None
    if mod != F.modulus:
        raise ValueError(f"field header key 'mod': {mod} differs from the canonical modulus {F.modulus}")
    return F
