"""Sparse multivariate polynomials over F_q."""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Mapping, Sequence

from ..algebra.field import FieldElement, PrimeField
from ..algebra.unipoly import UniPoly
from ..errors import RingMismatch, ZeroPolynomial

Monomial = tuple  # exponent vector, one entry per ring variable

DRL = "drl"
LEX = "lex"


class PolyRing:
    __slots__ = ("field", "names", "n", "index")

    def __init__(self, field: PrimeField, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                raise ValueError(f"bad variable name {nm!r}")
        self.field = field
        self.names = names
        self.n = len(names)
        self.index = {nm: i for i, nm in enumerate(names)}

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyRing) and self.field == other.field and self.names == other.names

    def __hash__(self) -> int:
        return hash((self.field, self.names))

    def __repr__(self) -> str:
        return f"PolyRing(q={self.field.q}, vars={list(self.names)})"

    @property
    def q(self) -> int:
        return self.field.q

    def zero_monomial(self) -> Monomial:
        return (0,) * self.n

    def gen(self, i: int | str) -> MPoly:
        if isinstance(i, str):
            i = self.index[i]
        e = [0] * self.n
        e[i] = 1
        return MPoly(self, {tuple(e): 1})

    @property
    def gens(self) -> list[MPoly]:
        return [self.gen(i) for i in range(self.n)]

    def const(self, c: int) -> MPoly:
        c = int(c) % self.q
        return MPoly(self, {self.zero_monomial(): c} if c else {})

    def zero(self) -> MPoly:
        return MPoly(self, {})

    def one(self) -> MPoly:
        return self.const(1)

    def linear(self, coeffs: Mapping[int, int], const: int = 0) -> MPoly:
        """sum coeffs[i] * x_i + const."""
        q = self.q
        terms = {}
        for i, c in coeffs.items():
            c %= q
            if c:
                e = [0] * self.n
                e[i] = 1
                terms[tuple(e)] = c
        const %= q
        if const:
            terms[self.zero_monomial()] = const
        return MPoly(self, terms)

    def parse(self, text: str) -> MPoly:
        return parse_poly(self, text)

    def __call__(self, text: str) -> MPoly:
        return parse_poly(self, text)


@dataclass(frozen=True)
class TermOrder:
    """DRL or LEX with an explicit variable ranking (``perm[0]`` is the greatest variable)."""

    kind: str
    perm: tuple
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in (DRL, LEX):
            raise ValueError(f"unknown order kind {self.kind}")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("perm must be a permutation")

    @classmethod
    def drl(cls, n: int, perm: Sequence[int] | None = None) -> TermOrder:
        return cls(DRL, tuple(range(n)) if perm is None else tuple(perm))

    @classmethod
    def lex(cls, n: int, perm: Sequence[int] | None = None) -> TermOrder:
        return cls(LEX, tuple(range(n)) if perm is None else tuple(perm))

    @property
    def n(self) -> int:
        return len(self.perm)

    def with_kind(self, kind: str) -> TermOrder:
        return TermOrder(kind, self.perm)

    def key(self, m: Monomial) -> tuple:
        """Sort key: larger key means larger monomial."""
        k = self._cache.get(m)
        if k is None:
            if self.kind == DRL:
                k = (sum(m),) + tuple(-m[i] for i in reversed(self.perm))
            else:
                k = tuple(m[i] for i in self.perm)
            self._cache[m] = k
        return k

    def neg_key(self, m: Monomial) -> tuple:
        return tuple(-v for v in self.key(m))

    def max(self, monomials: Iterable[Monomial]) -> Monomial:
        return max(monomials, key=self.key)

    def sorted(self, monomials: Iterable[Monomial], descending: bool = False) -> list[Monomial]:
        return sorted(monomials, key=self.key, reverse=descending)


def compare_monomials(a: Monomial, b: Monomial, order: TermOrder) -> int:
    """-1, 0 or 1 as a is less than, equal to or greater than b."""
    if len(a) != len(b) or len(a) != order.n:
        raise RingMismatch("exponent vectors of different length")
    ka, kb = order.key(tuple(a)), order.key(tuple(b))
    return (ka > kb) - (ka < kb)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def pure_power_var(m: Monomial) -> int | None:
    """Index i when m = x_i^d with d >= 1, else None."""
    idx = [i for i, e in enumerate(m) if e]
    return idx[0] if len(idx) == 1 else None


class MPoly:
    """Polynomial as a dict from exponent tuples to nonzero residues."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, int] | None = None):
        self.ring = ring
        if terms is None:
            self.terms = {}
        else:
            q = ring.q
            self.terms = {m: c % q for m, c in terms.items() if c % q}

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict) -> MPoly:
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    # -- basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def is_affine(self) -> bool:
        return self.degree() <= 1

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def constant_term(self) -> int:
        return self.terms.get(self.ring.zero_monomial(), 0)

    def coeff(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def variables(self) -> set[int]:
        out = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def lm(self, order: TermOrder) -> Monomial:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def lc(self, order: TermOrder) -> int:
        return self.terms[self.lm(order)]

    def monic(self, order: TermOrder) -> MPoly:
        if not self.terms:
            return self
        inv = pow(self.lc(order), -1, self.ring.q)
        return self * inv

    def sorted_terms(self, order: TermOrder) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def linear_coeffs(self) -> dict[int, int]:
        """Coefficients of the degree-one monomials."""
        out = {}
        for m, c in self.terms.items():
            if sum(m) == 1:
                out[m.index(1)] = c
        return out

    # -- arithmetic
    def _check(self, other: MPoly) -> None:
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatch("polynomials from different rings")

    def _lift(self, other) -> MPoly:
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, FieldElement):
            other = other.value
        return self.ring.const(int(other))

    def __add__(self, other) -> MPoly:
        other = self._lift(other)
        q = self.ring.q
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = (t.get(m, 0) + c) % q
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return MPoly._raw(self.ring, t)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        q = self.ring.q
        return MPoly._raw(self.ring, {m: q - c for m, c in self.terms.items()})

    def __sub__(self, other) -> MPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> MPoly:
        return self._lift(other) - self

    def __mul__(self, other) -> MPoly:
        q = self.ring.q
        if not isinstance(other, MPoly):
            c = int(other.value if isinstance(other, FieldElement) else other) % q
            if not c:
                return MPoly._raw(self.ring, {})
            return MPoly._raw(self.ring, {m: v * c % q for m, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return MPoly._raw(self.ring, {m: c % q for m, c in t.items() if c % q})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> MPoly:
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def mul_term(self, mono: Monomial, c: int) -> MPoly:
        q = self.ring.q
        c %= q
        if not c:
            return MPoly._raw(self.ring, {})
        return MPoly._raw(self.ring, {tuple(x + y for x, y in zip(m, mono)): v * c % q
                                      for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return format_poly(self)

    # -- evaluation and substitution
    def evaluate(self, point: Sequence[int]) -> int:
        q = self.ring.q
        acc = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * pow(int(x), e, q) % q
            acc += v
        return acc % q

    def __call__(self, *point) -> int:
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return self.evaluate(point)

    def compose(self, images: Sequence, one, zero=None):
        """Evaluate at ring elements ``images[i]`` (MPoly, UniPoly or int-like).

        ``one`` is the unit of the target ring.  Powers are cached per variable.
        """
        cache: dict[tuple[int, int], object] = {}

        def power(i: int, e: int):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
            return cache[key]

        acc = zero if zero is not None else one * 0
        for m, c in self.terms.items():
            t = None
            for i, e in enumerate(m):
                if e:
                    p = power(i, e)
                    t = p if t is None else t * p
            acc = acc + (one * c if t is None else t * c)
        return acc

    def subs(self, mapping: Mapping[int, object]) -> MPoly:
        """Substitute variables by ints or polynomials of the same ring."""
        gens = self.ring.gens
        images = [mapping.get(i, gens[i]) for i in range(self.ring.n)]
        images = [self.ring.const(v) if not isinstance(v, MPoly) else v for v in images]
        return self.compose(images, self.ring.one(), self.ring.zero())

    def to_uni(self, images: Sequence[UniPoly], field: PrimeField | None = None) -> UniPoly:
        f = field or self.ring.field
        return self.compose(images, UniPoly(f, [1]), UniPoly(f, []))

    def change_ring(self, ring: PolyRing, mapping: Sequence[int] | None = None) -> MPoly:
        """Re-index into ``ring``; ``mapping[i]`` is the new index of old variable i.

        Defaults to matching by variable name.  Variables that occur must map.
        """
        if mapping is None:
            mapping = [ring.index.get(nm, -1) for nm in self.ring.names]
        t = {}
        for m, c in self.terms.items():
            e = [0] * ring.n
            for i, k in enumerate(m):
                if k:
                    j = mapping[i]
                    if j < 0:
                        raise RingMismatch(f"variable {self.ring.names[i]} missing in target ring")
                    e[j] += k
            t[tuple(e)] = c
        return MPoly._raw(ring, t)


def top_component(f: MPoly) -> MPoly:
    if f.is_zero():
        raise ZeroPolynomial("top component of the zero polynomial")
    d = f.degree()
    return MPoly._raw(f.ring, {m: c for m, c in f.terms.items() if sum(m) == d})


def homogeneous_part(f: MPoly, d: int) -> MPoly:
    return MPoly._raw(f.ring, {m: c for m, c in f.terms.items() if sum(m) == d})


class PolySystem:
    """A list of polynomials sharing one ring, with optional role tags."""

    __slots__ = ("ring", "polys", "tags")

    def __init__(self, ring: PolyRing, polys: Iterable[MPoly] = (), tags: Sequence[str] | None = None):
        self.ring = ring
        self.polys = list(polys)
        for p in self.polys:
            if p.ring != ring:
                raise RingMismatch("system members must share one ring")
        if tags is not None and len(tags) != len(self.polys):
            raise ValueError("one tag per polynomial")
        self.tags = list(tags) if tags is not None else None

    def __iter__(self) -> Iterator[MPoly]:
        return iter(self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __repr__(self) -> str:
        return f"PolySystem({len(self.polys)} polys over {self.ring})"

    def degrees(self) -> list[int]:
        return [p.degree() for p in self.polys]

    def evaluate(self, point: Sequence[int]) -> list[int]:
        return [p.evaluate(point) for p in self.polys]

    def tagged(self, tag: str) -> list[MPoly]:
        if self.tags is None:
            return []
        return [p for p, t in zip(self.polys, self.tags) if t == tag]

    def leading_monomials(self, order: TermOrder) -> list[Monomial]:
        return [p.lm(order) for p in self.polys]


def as_list(F) -> list[MPoly]:
    return list(F.polys) if isinstance(F, PolySystem) else list(F)


def ring_of(F) -> PolyRing:
    if isinstance(F, PolySystem):
        return F.ring
    F = list(F)
    if not F:
        raise ValueError("empty polynomial list has no ring")
    return F[0].ring


# -- text format ------------------------------------------------------------

def format_term(ring: PolyRing, m: Monomial, c: int) -> str:
    parts = [str(c)]
    for i, e in enumerate(m):
        if e == 1:
            parts.append(ring.names[i])
        elif e:
            parts.append(f"{ring.names[i]}^{e}")
    return "*".join(parts)


def format_poly(f: MPoly, order: TermOrder | None = None) -> str:
    """``c*x1^a1*...*xn^an + ...`` with canonical coefficients, greatest term first."""
    if f.is_zero():
        return "0"
    order = order or TermOrder.drl(f.ring.n)
    return " + ".join(format_term(f.ring, m, c) for m, c in f.sorted_terms(order))


_TERM = re.compile(r"([+-]?)([^+-]+)")


def parse_poly(ring: PolyRing, text: str) -> MPoly:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return ring.zero()
    if _TERM.sub("", s):
        raise ValueError(f"cannot parse {text!r}")
    q = ring.q
    terms: dict = {}
    for sign, body in _TERM.findall(s):
        coef = 1
        e = [0] * ring.n
        for fac in body.split("*"):
            if not fac:
                raise ValueError(f"malformed term {body!r}")
            base, _, exp = fac.partition("^")
            exp = int(exp) if exp else 1
            if base.isdigit():
                coef = coef * pow(int(base), exp, q) % q
            elif base in ring.index:
                e[ring.index[base]] += exp
            else:
                raise ValueError(f"unknown symbol {base!r}")
        if sign == "-":
            coef = -coef
        m = tuple(e)
        terms[m] = (terms.get(m, 0) + coef) % q
    return MPoly(ring, terms)


def linear_combination(coeffs: Sequence[int], polys: Sequence[MPoly], ring: PolyRing | None = None) -> MPoly:
    """sum_i coeffs[i] * polys[i]."""
    ring = ring or polys[0].ring
    q = ring.q
    acc: dict = {}
    for a, p in zip(coeffs, polys):
        a %= q
        if not a:
            continue
        for m, c in p.terms.items():
            acc[m] = (acc.get(m, 0) + a * c) % q
    return MPoly._raw(ring, {m: c for m, c in acc.items() if c})


def matrix_apply(M: Sequence[Sequence[int]], polys: Sequence[MPoly]) -> list[MPoly]:
    return [linear_combination(row, polys) for row in M]
