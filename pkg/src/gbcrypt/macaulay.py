"""Macaulay and Boolean Macaulay matrices, solving-degree search and d_reg at small scale.

Matrices are dense; at desk scale (up to roughly 10^4 columns) the modular rref
kernel is faster than any sparse bookkeeping would be.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field
from itertools import combinations, combinations_with_replacement
from typing import Sequence

import numpy as np

from .algebra.matrix import DenseMatrix
from .algebra.kernels import rref_mod
from .budget import Budget
from .errors import NotBoolean, NotFoundWithin
from .mpoly.groebner import (
    _prepare,
    _reduce_prepared,
    buchberger,
    is_groebner,
    leading_ideal_is_zero_dimensional,
)
from .mpoly.poly import MPoly, PolyRing, PolySystem, TermOrder, as_list, mono_divides, ring_of, top_component


def monomials_of_degree(n: int, d: int) -> list[tuple]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def monomials_up_to(n: int, d: int) -> list[tuple]:
    return [m for k in range(d + 1) for m in monomials_of_degree(n, k)]


def squarefree_up_to(n: int, d: int) -> list[tuple]:
    out = []
    for k in range(min(d, n) + 1):
        for combo in combinations(range(n), k):
            e = [0] * n
            for i in combo:
                e[i] = 1
            out.append(tuple(e))
    return out


@dataclass
class MacaulayMatrix:
    ring: PolyRing
    order: TermOrder
    d: int
    columns: list  # monomials, descending
    row_labels: list  # (shift monomial, index into F)
    matrix: DenseMatrix
    boolean: bool = False

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def row_poly(self, k: int) -> MPoly:
        return _row_to_poly(self.ring, self.columns, self.matrix.data[k])


def _row_to_poly(ring: PolyRing, columns: Sequence, row) -> MPoly:
    return MPoly._raw(ring, {columns[j]: int(v) for j, v in enumerate(row) if v})


def _assemble(ring: PolyRing, order: TermOrder, d: int, columns: list, labels: list, polys: list,
              boolean: bool) -> MacaulayMatrix:
    columns = order.sorted(columns, descending=True)
    index = {m: j for j, m in enumerate(columns)}
    field = ring.field
    dtype = np.int64 if field.small else object
    data = np.zeros((len(polys), len(columns)), dtype=dtype)
    for i, p in enumerate(polys):
        for m, c in p.terms.items():
            data[i, index[m]] = c
    return MacaulayMatrix(ring, order, d, columns, labels, DenseMatrix(field, data), boolean)


def build_macaulay(F, d: int, order: TermOrder) -> MacaulayMatrix:
    """Inhomogeneous M_{<=d}: one row s*f per monomial s with deg(s*f) <= d."""
    polys = [f for f in as_list(F) if f]
    ring = ring_of(F)
    if polys and d < max(f.degree() for f in polys):
        raise ValueError("d must be at least the maximal degree of F")
    labels, rows = [], []
    for idx, f in enumerate(polys):
        for s in monomials_up_to(ring.n, d - f.degree()):
            labels.append((s, idx))
            rows.append(f.mul_term(s, 1))
    return _assemble(ring, order, d, monomials_up_to(ring.n, d), labels, rows, False)


def homogeneous_macaulay(F, d: int, order: TermOrder) -> MacaulayMatrix:
    """M_d of homogeneous F: rows s*f with deg(s*f) = d."""
    polys = [f for f in as_list(F) if f]
    ring = ring_of(F)
    labels, rows = [], []
    for idx, f in enumerate(polys):
        k = d - f.degree()
        if k < 0:
            continue
        for s in monomials_of_degree(ring.n, k):
            labels.append((s, idx))
            rows.append(f.mul_term(s, 1))
    return _assemble(ring, order, d, monomials_of_degree(ring.n, d), labels, rows, False)


def check_boolean(F_bool, order: TermOrder, budget: Budget | None = None) -> None:
    polys = [f for f in as_list(F_bool) if f]
    if not polys:
        raise NotBoolean("empty system")
    ring = polys[0].ring
    lms = {f.lm(order) for f in polys}
    for i in range(ring.n):
        sq = tuple(2 if j == i else 0 for j in range(ring.n))
        if sq not in lms:
            raise NotBoolean(f"no leading monomial {ring.names[i]}^2")
    if not is_groebner(polys, order, budget=budget):
        raise NotBoolean("not a Groebner basis")


def build_boolean_macaulay(F, F_bool, d: int, order: TermOrder, budget: Budget | None = None,
                           check: bool = True) -> MacaulayMatrix:
    """M^Bool_{<=d}: rows t*f mod F_bool for square-free standard monomials t."""
    if check:
        check_boolean(F_bool, order, budget)
    polys = [f for f in as_list(F) if f]
    ring = ring_of(F_bool)
    bool_lms = [f.lm(order) for f in as_list(F_bool) if f]
    standard = [m for m in squarefree_up_to(ring.n, d) if not any(mono_divides(l, m) for l in bool_lms)]
    divs = _prepare(as_list(F_bool), order)
    labels, rows = [], []
    for idx, f in enumerate(polys):
        if f.ring != ring:
            raise ValueError("F and F_bool must share a ring")
        k = d - f.degree()
        for t in standard:
            if sum(t) > k:
                continue
            labels.append((t, idx))
            rows.append(_reduce_prepared(f.mul_term(t, 1), divs, order, budget))
    return _assemble(ring, order, d, standard, labels, rows, True)


def rowspace(M: MacaulayMatrix) -> PolySystem:
    """Nonzero rows of the reduced echelon form, as monic polynomials."""
    if M.matrix.rows == 0 or M.matrix.cols == 0:
        return PolySystem(M.ring, [])
    R, piv = rref_mod(M.matrix.data, M.ring.q)
    return PolySystem(M.ring, [_row_to_poly(M.ring, M.columns, R[k]) for k in range(len(piv))])


def minimal_monomial_generators(monos) -> list:
    out = []
    for m in sorted(set(monos), key=sum):
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


def extract_gb(rows, F_bool, order: TermOrder, budget: Budget | None = None) -> PolySystem | None:
    """A Groebner basis filtered from rows and F_bool by minimal leading monomials, or None."""
    rows = [f for f in as_list(rows) if f]
    fb = [f for f in as_list(F_bool) if f] if F_bool is not None else []
    pool = fb + rows  # F_bool members win ties on identical leading monomials
    if not pool:
        return None
    ring = pool[0].ring
    by_lm = {}
    for f in pool:
        by_lm.setdefault(f.lm(order), f)
    S = [by_lm[m].monic(order) for m in minimal_monomial_generators(by_lm)]
    S.sort(key=lambda f: order.key(f.lm(order)), reverse=True)
    if not is_groebner(S, order, budget=budget):
        return None
    divs = _prepare(S, order)
    for f in pool:
        if _reduce_prepared(f, divs, order, budget):
            return None
    return PolySystem(ring, S)


@dataclass
class DegreeRecord:
    d: int
    rows: int
    cols: int
    rank: int
    elapsed: float
    success: bool

    def as_dict(self) -> dict:
        return {"d": self.d, "rows": self.rows, "cols": self.cols, "rank": self.rank,
                "elapsed_s": round(self.elapsed, 6), "success": self.success}


@dataclass
class SolvingDegreeResult:
    degree: int
    gb: PolySystem
    boolean: bool
    records: list = dc_field(default_factory=list)


def _closed_rowspace(polys: list, F_bool, d: int, order: TermOrder, budget: Budget | None):
    """Row space at degree d, re-multiplying every lower-degree member until nothing new appears."""
    gens = list(polys)
    seen_rank = -1
    while True:
        if F_bool is not None:
            M = build_boolean_macaulay(gens, F_bool, d, order, budget, check=False)
        else:
            M = build_macaulay(gens, d, order)
        if budget is not None:
            budget.tick(M.matrix.rows * max(M.matrix.cols, 1))
        rows = rowspace(M)
        if len(rows) == seen_rank:
            return M, rows
        seen_rank = len(rows)
        gens = list(polys) + [f for f in rows if f.degree() < d]


def solving_degree_search(F, order: TermOrder, d_max: int, F_bool=None,
                          budget: Budget | None = None, closure: bool = False) -> SolvingDegreeResult:
    """Least d whose (Boolean) Macaulay row space yields a Groebner basis.

    With ``F_bool`` the Boolean matrix of F u F_bool is used; otherwise the plain
    inhomogeneous matrix of F.  With ``closure`` the row space at each d is
    saturated by multiplying its lower-degree members again (still capped at
    degree d), which is what an F4-style working degree measures.
    """
    polys = [f for f in as_list(F) if f]
    boolean = F_bool is not None
    if boolean:
        check_boolean(F_bool, order, budget)
        start = max(f.degree() for f in polys + as_list(F_bool))
    else:
        start = max(f.degree() for f in polys)
    records = []
    for d in range(start, d_max + 1):
        t0 = time.perf_counter()
        if closure:
            M, rows = _closed_rowspace(polys, F_bool if boolean else None, d, order, budget)
        else:
            if boolean:
                M = build_boolean_macaulay(polys, F_bool, d, order, budget, check=False)
            else:
                M = build_macaulay(polys, d, order)
            if budget is not None:
                budget.tick(M.matrix.rows * max(M.matrix.cols, 1))
            rows = rowspace(M)
        gb = extract_gb(rows, F_bool if boolean else None, order, budget)
        rec = DegreeRecord(d, M.matrix.rows, M.matrix.cols, len(rows), time.perf_counter() - t0, gb is not None)
        records.append(rec)
        if gb is not None:
            return SolvingDegreeResult(d, gb, boolean, records)
    raise NotFoundWithin(d_max)


def dreg_small(F, budget: Budget | None = None) -> float:
    """Degree of regularity of F; math.inf when (F^top) is not zero-dimensional."""
    polys = [f for f in as_list(F) if f]
    ring = ring_of(F)
    n = ring.n
    top = [top_component(f) for f in polys]
    order = TermOrder.drl(n)
    G = buchberger(top, order, budget)
    if not leading_ideal_is_zero_dimensional([g.lm(order) for g in G], n):
        return math.inf
    d = 0
    while True:
        M = homogeneous_macaulay(top, d, order)
        if budget is not None:
            budget.tick(M.matrix.rows * max(M.matrix.cols, 1))
        rank = M.matrix.rank() if M.matrix.rows else 0
        if rank == math.comb(n + d - 1, d):
            return d
        d += 1
