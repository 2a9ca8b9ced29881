"""Univariate polynomials over F_q: arithmetic, gcd and root finding."""

from __future__ import annotations

import random
from typing import Iterable, Sequence

import numpy as np

from ..errors import ZeroPolynomial
from .field import FieldElement, PrimeField

_KARATSUBA_CUTOFF = 32
SCAN_LIMIT = 1 << 16


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _school(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [v % q for v in out]


def _karatsuba(a: list[int], b: list[int], q: int) -> list[int]:
    if min(len(a), len(b)) <= _KARATSUBA_CUTOFF:
        return _school(a, b, q)
    m = max(len(a), len(b)) // 2
    a0, a1 = a[:m], a[m:] or [0]
    b0, b1 = b[:m], b[m:] or [0]
    z0 = _karatsuba(a0, b0, q)
    z2 = _karatsuba(a1, b1, q)
    sa = [(x + y) % q for x, y in _zip_pad(a0, a1)]
    sb = [(x + y) % q for x, y in _zip_pad(b0, b1)]
    z1 = _karatsuba(sa, sb, q)
    out = [0] * (len(a) + len(b) - 1)
    for i, v in enumerate(z0):
        out[i] += v
        if i < len(z1):
            z1[i] -= v
    for i, v in enumerate(z2):
        if i < len(z1):
            z1[i] -= v
        if i + 2 * m < len(out):
            out[i + 2 * m] += v
    for i, v in enumerate(z1):
        if i + m < len(out):
            out[i + m] += v
    return [v % q for v in out]


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def poly_mul(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    """Product of coefficient lists (low degree first) mod q."""
    if not a or not b:
        return []
    if min(len(a), len(b)) <= 8:
        return _trim(_school(a, b, q))
    if q < 1 << 31:
        n = min(len(a), len(b))
        if n * (q - 1) ** 2 < 1 << 62:
            r = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % q
            return _trim([int(v) for v in r])
        # split into 16-bit limbs so every partial convolution stays below 2^63
        A = np.asarray(a, dtype=np.int64)
        B = np.asarray(b, dtype=np.int64)
        a0, a1 = A & 0xFFFF, A >> 16
        b0, b1 = B & 0xFFFF, B >> 16
        lo = np.convolve(a0, b0) % q
        mid = (np.convolve(a0, b1) % q + np.convolve(a1, b0) % q) % q
        hi = np.convolve(a1, b1) % q
        s16 = (1 << 16) % q
        s32 = (1 << 32) % q
        r = (lo + mid * s16 % q + hi * s32 % q) % q
        return _trim([int(v) for v in r])
    return _trim(_karatsuba(list(a), list(b), q))


def poly_divmod(a: Sequence[int], b: Sequence[int], q: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _trim(a)
    inv = pow(b[-1], -1, q)
    quo = [0] * (len(a) - db)
    if q < 1 << 31 and len(a) > 64:
        A = np.asarray(a, dtype=np.int64) % q
        B = np.asarray(b, dtype=np.int64)
        for i in range(len(a) - 1, db - 1, -1):
            c = int(A[i]) * inv % q
            if c:
                quo[i - db] = c
                A[i - db:i + 1] = (A[i - db:i + 1] - c * B) % q
        return _trim(quo), _trim([int(v) for v in A[:db]])
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % q * inv % q
        if c:
            quo[i - db] = c
            for j, bj in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * bj) % q
    return _trim(quo), _trim([v % q for v in a[:db]])


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs: Iterable[int] = ()):
        self.field = field
        q = field.q
        self.coeffs = _trim([int(c) % q for c in coeffs])

    @classmethod
    def x(cls, field: PrimeField) -> UniPoly:
        return cls(field, [0, 1])

    @classmethod
    def const(cls, field: PrimeField, c: int) -> UniPoly:
        return cls(field, [c])

    @classmethod
    def from_roots(cls, field: PrimeField, roots: Iterable[int]) -> UniPoly:
        p = cls(field, [1])
        for r in roots:
            p = p * cls(field, [-r, 1])
        return p

    def _new(self, coeffs: list[int]) -> UniPoly:
        p = UniPoly.__new__(UniPoly)
        p.field = self.field
        p.coeffs = coeffs
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def monic(self) -> UniPoly:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        inv = pow(self.coeffs[-1], -1, self.field.q)
        q = self.field.q
        return self._new([c * inv % q for c in self.coeffs])

    def _coerce(self, other) -> list[int]:
        if isinstance(other, UniPoly):
            return other.coeffs
        if isinstance(other, FieldElement):
            other = other.value
        return _trim([int(other) % self.field.q])

    def __add__(self, other) -> UniPoly:
        b = self._coerce(other)
        q = self.field.q
        return self._new(_trim([(x + y) % q for x, y in _zip_pad(self.coeffs, b)]))

    __radd__ = __add__

    def __sub__(self, other) -> UniPoly:
        b = self._coerce(other)
        q = self.field.q
        return self._new(_trim([(x - y) % q for x, y in _zip_pad(self.coeffs, b)]))

    def __rsub__(self, other) -> UniPoly:
        return (-self) + other

    def __neg__(self) -> UniPoly:
        q = self.field.q
        return self._new([-c % q for c in self.coeffs])

    def __mul__(self, other) -> UniPoly:
        if isinstance(other, UniPoly):
            return self._new(poly_mul(self.coeffs, other.coeffs, self.field.q))
        c = self._coerce(other)
        if not c:
            return self._new([])
        q = self.field.q
        return self._new(_trim([v * c[0] % q for v in self.coeffs]))

    __rmul__ = __mul__

    def __divmod__(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        quo, rem = poly_divmod(self.coeffs, other.coeffs, self.field.q)
        return self._new(quo), self._new(rem)

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: UniPoly) -> UniPoly:
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> UniPoly:
        out = self._new([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([other % self.field.q])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, tuple(self.coeffs)))

    def __call__(self, x: int) -> int:
        q = self.field.q
        x = int(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % q
        return acc

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*x" if i == 1 else f"{c}*x^{i}")
        return " + ".join(terms)

    def derivative(self) -> UniPoly:
        q = self.field.q
        return self._new(_trim([i * c % q for i, c in enumerate(self.coeffs) if i]))

    def powmod(self, e: int, modulus: UniPoly) -> UniPoly:
        """self^e mod modulus by square-and-multiply."""
        out = self._new([1]) % modulus
        base = self % modulus
        while e:
            if e & 1:
                out = (out * base) % modulus
            e >>= 1
            if e:
                base = (base * base) % modulus
        return out

    def gcd(self, other: UniPoly) -> UniPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def exact_div(self, other: UniPoly) -> UniPoly:
        quo, rem = divmod(self, other)
        if not rem.is_zero():
            raise ValueError("division is not exact")
        return quo


def field_equation_gcd(f: UniPoly) -> UniPoly:
    """gcd(f, x^q - x), monic; its roots are the distinct F_q-roots of f."""
    if f.is_zero():
        raise ZeroPolynomial("field_equation_gcd of the zero polynomial")
    if f.degree == 0:
        return UniPoly(f.field, [1])
    field = f.field
    xq = UniPoly.x(field).powmod(field.q, f)
    return f.gcd(xq - UniPoly.x(field))


def _scan_roots(g: UniPoly) -> list[int]:
    q = g.field.q
    xs = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for c in reversed(g.coeffs):
        acc = (acc * xs + c) % q
    return [int(v) for v in np.flatnonzero(acc == 0)]


def _split_roots(g: UniPoly, rng: random.Random) -> list[int]:
    """Roots of a monic squarefree g that splits into distinct linear factors."""
    if g.degree == 0:
        return []
    if g.degree == 1:
        return [(-g.coeffs[0]) % g.field.q]
    q = g.field.q
    while True:
        delta = rng.randrange(q)
        h = UniPoly(g.field, [delta, 1]).powmod((q - 1) // 2, g) - 1
        d = g.gcd(h) if not h.is_zero() else g
        if 0 < d.degree < g.degree:
            return _split_roots(d, rng) + _split_roots(g // d, rng)


def roots_int(f: UniPoly, method: str = "auto", seed: int = 0) -> list[int]:
    """Sorted distinct F_q-roots of f as ints."""
    g = field_equation_gcd(f)
    if g.degree == 0:
        return []
    if method == "scan" or (method == "auto" and g.field.q < SCAN_LIMIT):
        return _scan_roots(g)
    return sorted(_split_roots(g, random.Random(seed)))


def uni_roots(f: UniPoly, method: str = "auto", seed: int = 0) -> set[FieldElement]:
    return {FieldElement(r, f.field) for r in roots_int(f, method, seed)}
