"""Prime fields F_q with 3 <= q < 2^128.

Internally every algorithm works on plain Python ints in [0, q); Python's
arbitrary precision integers give the double-width product for free, so a
128-bit modulus needs no special multiplication routine.  ``FieldElement``
is a thin typed wrapper for callers that want operator syntax.
"""

from __future__ import annotations

import random

from ..errors import InversionOfZero

MR_ROUNDS = 40
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_probable_prime(n: int, rounds: int = MR_ROUNDS) -> bool:
    """Miller-Rabin with fixed small bases followed by ``rounds`` seeded random bases."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(n)
    bases = list(_SMALL_PRIMES[:12]) + [rng.randrange(2, n - 1) for _ in range(rounds)]
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    __slots__ = ("q",)

    def __init__(self, q: int):
        q = int(q)
        if not 3 <= q < 1 << 128:
            raise ValueError(f"modulus {q} outside [3, 2^128)")
        if not is_probable_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        self.q = q

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("F", self.q))

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"

    @property
    def small(self) -> bool:
        """True when products of two residues fit in a signed 64-bit integer."""
        return self.q < 1 << 31

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    # raw-int helpers used by the hot paths
    def red(self, a: int) -> int:
        return a % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise InversionOfZero("inverse of zero")
        return pow(a, -1, self.q)

    def neg(self, a: int) -> int:
        return -a % self.q

    def sqrt_minus_one_exists(self) -> bool:
        return self.q % 4 == 1


class FieldElement:
    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = int(value) % field.q
        self.field = field

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.field)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.field)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def __truediv__(self, other):
        return self * field_inv(FieldElement(self._coerce(other), self.field))

    def __pow__(self, e: int):
        if e < 0:
            return field_inv(self) ** (-e)
        return FieldElement(pow(self.value, e, self.field.q), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.q
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field.q))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.q})"


def field_inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.field.inv(a.value), a.field)
