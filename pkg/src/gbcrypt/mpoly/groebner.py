"""Multivariate division, Buchberger's algorithm and staircase utilities."""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from ..budget import Budget
from ..errors import NotZeroDimensional, RingMismatch
from .poly import (
    DRL,
    Monomial,
    MPoly,
    PolyRing,
    PolySystem,
    TermOrder,
    as_list,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    pure_power_var,
    ring_of,
    top_component,
)


class _Divisor:
    __slots__ = ("lm", "support", "inv", "tail")

    def __init__(self, g: MPoly, order: TermOrder):
        self.lm = g.lm(order)
        self.support = [(i, e) for i, e in enumerate(self.lm) if e]
        q = g.ring.q
        self.inv = pow(g.terms[self.lm], -1, q)
        self.tail = [(m, c) for m, c in g.terms.items() if m != self.lm]

    def divides(self, m: Monomial) -> bool:
        for i, e in self.support:
            if m[i] < e:
                return False
        return True


def _prepare(G: Iterable[MPoly], order: TermOrder) -> list[_Divisor]:
    divs = [_Divisor(g, order) for g in G if g]
    drl = order if order.kind == DRL else order.with_kind(DRL)
    # ties go to the member with the DRL-greatest leading monomial
    divs.sort(key=lambda d: drl.key(d.lm), reverse=True)
    return divs


def _reduce_prepared(f: MPoly, divs: list[_Divisor], order: TermOrder, budget: Budget | None = None,
                     full: bool = True) -> MPoly:
    ring = f.ring
    q = ring.q
    p = dict(f.terms)
    rem: dict = {}
    heap = [(order.neg_key(m), m) for m in p]
    heapq.heapify(heap)
    neg_key = order.neg_key
    while heap:
        _, m = heapq.heappop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        for d in divs:
            if d.divides(m):
                if budget is not None:
                    budget.tick()
                shift = tuple(a - b for a, b in zip(m, d.lm))
                factor = c * d.inv % q
                for tm, tc in d.tail:
                    nm = tuple(a + b for a, b in zip(shift, tm))
                    old = p.get(nm)
                    if old is None:
                        p[nm] = -factor * tc % q
                        heapq.heappush(heap, (neg_key(nm), nm))
                    else:
                        v = (old - factor * tc) % q
                        if v:
                            p[nm] = v
                        else:
                            del p[nm]
                break
        else:
            rem[m] = c
            if not full:
                rem.update(p)
                break
    return MPoly._raw(ring, rem)


def reduce(f: MPoly, G, order: TermOrder, budget: Budget | None = None) -> MPoly:
    """Remainder of f on division by G (full reduction)."""
    G = as_list(G)
    for g in G:
        if g.ring != f.ring:
            raise RingMismatch("reduce: ring mismatch")
    return _reduce_prepared(f, _prepare(G, order), order, budget)


def spoly(f: MPoly, g: MPoly, order: TermOrder) -> MPoly:
    a, b = f.lm(order), g.lm(order)
    lcm = mono_lcm(a, b)
    q = f.ring.q
    return (f.mul_term(mono_div(lcm, a), pow(f.terms[a], -1, q))
            - g.mul_term(mono_div(lcm, b), pow(g.terms[b], -1, q)))


def minimalize(G: Sequence[MPoly], order: TermOrder) -> list[MPoly]:
    """Drop members whose leading monomial is divisible by another's."""
    G = sorted((g for g in G if g), key=lambda g: order.key(g.lm(order)))
    out: list[MPoly] = []
    for g in G:
        lm = g.lm(order)
        if not any(mono_divides(h.lm(order), lm) for h in out):
            out.append(g)
    return out


def interreduce(G: Sequence[MPoly], order: TermOrder, budget: Budget | None = None) -> list[MPoly]:
    """Reduced form of a minimal basis: monic, tails reduced, sorted by LM descending."""
    G = minimalize(G, order)
    out = []
    for i, g in enumerate(G):
        others = G[:i] + G[i + 1:]
        r = _reduce_prepared(g, _prepare(others, order), order, budget) if others else g
        out.append(r.monic(order))
    out.sort(key=lambda g: order.key(g.lm(order)), reverse=True)
    return out


def buchberger(F, order: TermOrder, budget: Budget | None = None, interreduce_output: bool = True) -> PolySystem:
    """Reduced Groebner basis via normal selection, coprime skip and the chain criterion."""
    polys = [f for f in as_list(F) if f]
    ring = ring_of(F)
    if not polys:
        return PolySystem(ring, [])
    G: list[MPoly] = []
    lms: list[Monomial] = []
    pending: set[tuple[int, int]] = set()
    heap: list = []

    def add(h: MPoly) -> None:
        h = h.monic(order)
        k = len(G)
        G.append(h)
        lm = h.lm(order)
        lms.append(lm)
        for i in range(k):
            if lms[i] is None:
                continue
            if mono_coprime(lms[i], lm):
                continue
            pending.add((i, k))
            heapq.heappush(heap, (order.key(mono_lcm(lms[i], lm)), i, k))
        # members whose LM is now divisible by lm stay (their pairs are still sound)

    for f in sorted(polys, key=lambda p: order.key(p.lm(order))):
        r = _reduce_prepared(f, _prepare(G, order), order, budget) if G else f
        if r:
            if r.is_constant():
                return PolySystem(ring, [ring.one()])
            add(r)

    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        lcm = mono_lcm(lms[i], lms[j])
        if _chain(i, j, lcm, lms, pending):
            continue
        if budget is not None:
            budget.tick()
        s = spoly(G[i], G[j], order)
        r = _reduce_prepared(s, _prepare(G, order), order, budget)
        if r:
            if r.is_constant():
                return PolySystem(ring, [ring.one()])
            add(r)
    out = interreduce(G, order, budget) if interreduce_output else minimalize(G, order)
    return PolySystem(ring, out)


def _chain(i: int, j: int, lcm: Monomial, lms: list, pending: set) -> bool:
    for k, lm in enumerate(lms):
        if k in (i, j) or lm is None:
            continue
        if not mono_divides(lm, lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def is_groebner(G, order: TermOrder, skip_coprime: bool = True, budget: Budget | None = None) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    G = [g for g in as_list(G) if g]
    if not G:
        return True
    ring = G[0].ring
    for g in G:
        if g.ring != ring:
            raise RingMismatch("is_groebner: ring mismatch")
    divs = _prepare(G, order)
    lms = [g.lm(order) for g in G]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if skip_coprime and mono_coprime(lms[i], lms[j]):
                continue
            if budget is not None:
                budget.tick()
            if _reduce_prepared(spoly(G[i], G[j], order), divs, order, budget):
                return False
    return True


def leading_ideal_is_zero_dimensional(lms: Sequence[Monomial], n: int) -> bool:
    have = set()
    for m in lms:
        if not any(m):
            return True
        v = pure_power_var(m)
        if v is not None:
            have.add(v)
    return len(have) == n


def quotient_basis(G, order: TermOrder) -> list[Monomial]:
    """Standard monomials of a zero-dimensional Groebner basis, ascending in ``order``."""
    G = [g for g in as_list(G) if g]
    if not G:
        raise NotZeroDimensional("empty basis")
    n = G[0].ring.n
    lms = [g.lm(order) for g in G]
    if not leading_ideal_is_zero_dimensional(lms, n):
        raise NotZeroDimensional("some variable has no pure-power leading monomial")
    if any(not any(m) for m in lms):
        return []
    one = (0,) * n
    seen = {one}
    stack = [one]
    while stack:
        m = stack.pop()
        for i in range(n):
            t = m[:i] + (m[i] + 1,) + m[i + 1:]
            if t in seen or any(mono_divides(l, t) for l in lms):
                continue
            seen.add(t)
            stack.append(t)
    return order.sorted(seen)


def _drl_last(n: int, v: int) -> TermOrder:
    return TermOrder.drl(n, [i for i in range(n) if i != v] + [v])


def is_generic_coordinates_small(F, budget: Budget | None = None) -> bool:
    """Decide generic coordinates of (F^top) by the pure-power procedure.

    Repeatedly look for a variable x_i with some x_i^d in the current homogeneous
    ideal (a Groebner basis under DRL with x_i ranked last then contains a
    pure power of x_i as a leading monomial), add x_i to the ideal, and continue
    until every variable has been handled.
    """
    polys = [f for f in as_list(F) if f]
    if not polys:
        return False
    ring: PolyRing = polys[0].ring
    current = [top_component(f) for f in polys]
    remaining = list(range(ring.n))
    while remaining:
        for v in remaining:
            if not current:
                return False
            order = _drl_last(ring.n, v)
            G = buchberger(current, order, budget)
            ok = False
            for g in G:
                lm = g.lm(order)
                if all(e == 0 for i, e in enumerate(lm) if i != v):
                    ok = True
                    break
            if ok:
                current = [h for h in (f.subs({v: 0}) for f in current) if h]
                remaining.remove(v)
                break
        else:
            return False
    return True
