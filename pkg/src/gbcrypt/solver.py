"""Zero finding from DRL Groebner bases and the two key-recovery pipelines."""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import ciminion as cim
from . import hydra as hyd
from .algebra.kernels import charpoly_mod
from .algebra.matrix import DenseMatrix
from .algebra.unipoly import UniPoly, field_equation_gcd, roots_int
from .budget import Budget
from .errors import NoSolution, NotZeroDimensional, ShapeViolation
from .mpoly.groebner import _prepare, _reduce_prepared, quotient_basis
from .mpoly.poly import MPoly, PolyRing, PolySystem, TermOrder, as_list, mono_divides, pure_power_var, ring_of


@dataclass
class SolveOptions:
    N: int | None = None  # cap on roots explored per iteration; None explores all
    budget: Budget | None = None
    seed: int = 0
    charpoly: str = "auto"  # "block", "hessenberg" or "auto"

    def __post_init__(self):
        if self.N is not None and self.N < 1:
            raise ValueError("N must be at least 1")


@dataclass
class MultiplicationMatrix:
    matrix: DenseMatrix
    basis: list
    var: int


def _basis_by_power(basis: Sequence, var: int, order: TermOrder) -> list:
    """Standard monomials grouped as B', x B', x^2 B', ..."""
    return sorted(basis, key=lambda m: (m[var], order.key(m[:var] + (0,) + m[var + 1:])))


def multiplication_matrix(G, order: TermOrder, var: int, budget: Budget | None = None) -> MultiplicationMatrix:
    """Row b holds the coefficients of NF(b * x_var)."""
    G = [g for g in as_list(G) if g]
    basis = _basis_by_power(quotient_basis(G, order), var, order)
    index = {m: i for i, m in enumerate(basis)}
    ring = G[0].ring
    field = ring.field
    divs = _prepare(G, order)
    dim = len(basis)
    data = np.zeros((dim, dim), dtype=np.int64 if field.small else object)
    for i, b in enumerate(basis):
        m = b[:var] + (b[var] + 1,) + b[var + 1:]
        j = index.get(m)
        if j is not None:
            data[i, j] = 1
            continue
        nf = _reduce_prepared(MPoly._raw(ring, {m: 1}), divs, order, budget)
        for t, c in nf.terms.items():
            data[i, index[t]] = c
    return MultiplicationMatrix(DenseMatrix(field, data), basis, var)


def _bareiss_det(A: list[list[UniPoly]], budget: Budget | None = None) -> UniPoly:
    """Fraction-free determinant over F_q[x]."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    field = A[0][0].field
    A = [row[:] for row in A]
    sign = 1
    prev = UniPoly.const(field, 1)
    for k in range(n - 1):
        if A[k][k].is_zero():
            for i in range(k + 1, n):
                if not A[i][k].is_zero():
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return UniPoly(field, [])
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            for j in range(k + 1, n):
                if budget is not None:
                    budget.tick()
                t = A[i][j] * akk
                if not aik.is_zero() and not A[k][j].is_zero():
                    t = t - aik * A[k][j]
                A[i][j] = t.exact_div(prev)
        prev = akk
    det = A[n - 1][n - 1]
    return -det if sign < 0 else det


def block_charpoly(G, order: TermOrder, budget: Budget | None = None, var: int | None = None) -> UniPoly:
    """Characteristic polynomial of M_{x_n} as det(x^d I - sum x^i A_i).

    Needs the quotient basis to split as B' u x_n B' u ... u x_n^{d-1} B';
    otherwise the dense characteristic polynomial of M_{x_n} is returned.
    """
    G = [g for g in as_list(G) if g]
    var = order.perm[-1] if var is None else var
    mm = multiplication_matrix(G, order, var, budget)
    field = G[0].ring.field
    basis = mm.basis
    base = [b for b in basis if b[var] == 0]
    D = len(base)
    d = len(basis) // D if D else 0
    product = D * d == len(basis) and all(
        basis[k * D + i] == base[i][:var] + (k,) + base[i][var + 1:] for k in range(d) for i in range(D))
    if not product:
        return UniPoly(field, charpoly_mod(mm.matrix.data, field.q))
    data = mm.matrix.data
    q = field.q
    last = (d - 1) * D
    entries = []
    for a in range(D):
        row = []
        for b in range(D):
            coeffs = [(-int(data[last + a, i * D + b])) % q for i in range(d)] + [1 if a == b else 0]
            row.append(UniPoly(field, coeffs))
        entries.append(row)
    return _bareiss_det(entries, budget)


def charpoly_of_last(G, order: TermOrder, opts: SolveOptions, var: int) -> UniPoly:
    G = as_list(G)
    field = G[0].ring.field
    method = opts.charpoly
    if method == "auto":
        method = "block" if len(quotient_basis(G, order)) <= 64 else "hessenberg"
    if method == "block":
        return block_charpoly(G, order, opts.budget, var)
    mm = multiplication_matrix(G, order, var, opts.budget)
    if opts.budget is not None:
        opts.budget.tick(mm.matrix.rows ** 3)
    return UniPoly(field, charpoly_mod(mm.matrix.data, field.q))


# -- dedicated eigenvalue method ----------------------------------------------

def _quadratic_vars(f: MPoly) -> set[int]:
    return {i for m in f.terms if sum(m) == 2 for i, e in enumerate(m) if e}


def check_special_shape(G, order: TermOrder) -> dict[int, MPoly]:
    """Map variable -> member with leading monomial var^2; raise ShapeViolation otherwise."""
    G = [g for g in as_list(G) if g]
    n = G[0].ring.n
    rank = {v: k for k, v in enumerate(order.perm)}
    by_var: dict[int, MPoly] = {}
    for g in G:
        lm = g.lm(order)
        v = pure_power_var(lm)
        if v is None or lm[v] != 2 or v in by_var or g.degree() != 2:
            raise ShapeViolation("leading monomials must be distinct pure squares")
        if any(rank[w] < rank[v] for w in _quadratic_vars(g)):
            raise ShapeViolation("quadratic part involves a greater variable")
        by_var[v] = g
    if len(by_var) != n:
        raise ShapeViolation("need one quadratic per variable")
    return by_var


@dataclass
class _SolveStats:
    branches: int = 0
    charpolys: int = 0
    fallbacks: int = 0
    roots_seen: list = dc_field(default_factory=list)


def eigen_solve(G, order: TermOrder | None = None, opts: SolveOptions | None = None, extras=(),
                stats: _SolveStats | None = None) -> list[tuple[int, ...]]:
    """All F_q-rational common zeros of G (and ``extras``), sorted.

    The last variable is found as a root of the characteristic polynomial of
    M_{x_n}; its now affine polynomial then eliminates a paired variable that
    does not occur in the remaining quadratic parts, and the method recurses.
    When no such variable exists the affine relation becomes a constraint and
    only x_n is removed.  Every candidate is checked on G and ``extras``.
    """
    G = [g for g in as_list(G) if g]
    ring = G[0].ring
    order = order or TermOrder.drl(ring.n)
    opts = opts or SolveOptions()
    stats = stats if stats is not None else _SolveStats()
    by_var = check_special_shape(G, order)
    q = ring.q
    checks = G + [e for e in as_list(extras) if e]
    found: set[tuple[int, ...]] = set()
    active = list(order.perm)  # greatest first
    for point in _solve_rec(ring, {v: by_var[v] for v in active}, active, {}, opts, stats):
        full = tuple(point[i] % q for i in range(ring.n))
        if all(f.evaluate(full) == 0 for f in checks):
            found.add(full)
    return sorted(found)


def _sub_ring(ring: PolyRing, active: list[int]) -> tuple[PolyRing, list[int]]:
    sub = PolyRing(ring.field, [ring.names[v] for v in active])
    mapping = [-1] * ring.n
    for k, v in enumerate(active):
        mapping[v] = k
    return sub, mapping


def _solve_rec(ring, polys: dict[int, MPoly], active: list[int], subs: dict, opts: SolveOptions,
               stats: _SolveStats):
    """Yield full assignments (dicts var -> value) extending ``subs``."""
    q = ring.q
    if opts.budget is not None:
        opts.budget.tick()
    if not active:
        yield _lift(subs, ring.n, q)
        return
    last = active[-1]
    if len(active) == 1:
        f = polys[last]
        coeffs = [0] * (f.degree() + 1)
        for m, c in f.terms.items():
            coeffs[m[last]] = c
        roots = roots_int(field_equation_gcd(UniPoly(ring.field, coeffs)), seed=opts.seed)
        stats.charpolys += 1
        stats.roots_seen.append(len(roots))
        for a in roots[: opts.N]:
            stats.branches += 1
            yield _lift({**subs, last: ring.const(a)}, ring.n, q)
        return
    sub, mapping = _sub_ring(ring, active)
    sub_polys = [p.change_ring(sub, mapping) for p in polys.values()]
    sub_order = TermOrder.drl(sub.n)
    chi = charpoly_of_last(sub_polys, sub_order, opts, sub.n - 1)
    stats.charpolys += 1
    roots = roots_int(field_equation_gcd(chi), seed=opts.seed)
    stats.roots_seen.append(len(roots))
    for a in roots[: opts.N]:
        stats.branches += 1
        fixed = {v: p.subs({last: a}) for v, p in polys.items() if v != last}
        rel = polys[last].subs({last: a})  # affine in the remaining variables
        rest = active[:-1]
        if rel.is_constant():
            if rel.is_zero():
                stats.fallbacks += 1
                yield from _solve_rec(ring, fixed, rest, {**subs, last: ring.const(a)}, opts, stats)
            continue
        partner = _pick_partner(rel, fixed, rest)
        if partner is None:
            stats.fallbacks += 1
            yield from _solve_rec(ring, fixed, rest, {**subs, last: ring.const(a)}, opts, stats)
            continue
        c = rel.terms[tuple(1 if i == partner else 0 for i in range(ring.n))]
        expr = (rel - ring.gen(partner) * c) * (-pow(c, -1, q) % q)
        nxt = {v: p.subs({partner: expr}) for v, p in fixed.items() if v != partner}
        yield from _solve_rec(ring, nxt, [v for v in rest if v != partner],
                              {**subs, last: ring.const(a), partner: expr}, opts, stats)


def _pick_partner(rel: MPoly, polys: dict[int, MPoly], active: list[int]) -> int | None:
    lin = rel.linear_coeffs()
    for v in active:  # greatest variable first
        if v not in lin:
            continue
        if all(v not in _quadratic_vars(p) for w, p in polys.items() if w != v):
            return v
    return None


def _lift(subs: dict, n: int, q: int) -> list[int]:
    """Resolve the substitution chain into a point; later entries may refer to earlier ones."""
    vals: dict[int, int] = {}
    pending = dict(subs)
    while pending:
        progressed = False
        for v, expr in list(pending.items()):
            if expr.variables() <= set(vals):
                point = [vals.get(i, 0) for i in range(n)]
                vals[v] = expr.evaluate(point)
                del pending[v]
                progressed = True
        if not progressed:
            raise ShapeViolation("substitution chain does not resolve")
    return [vals.get(i, 0) for i in range(n)]


# -- FGLM ---------------------------------------------------------------------

def fglm(G_drl, lex_order: TermOrder, drl_order: TermOrder | None = None,
         budget: Budget | None = None) -> PolySystem:
    """Deterministic FGLM from a zero-dimensional DRL basis to the reduced LEX basis."""
    G = [g for g in as_list(G_drl) if g]
    ring = G[0].ring
    n = ring.n
    q = ring.q
    drl = drl_order or TermOrder.drl(n)
    basis = quotient_basis(G, drl)
    dim = len(basis)
    if dim == 0:
        return PolySystem(ring, [ring.one()])
    mats = [multiplication_matrix(G, drl, v, budget) for v in range(n)]
    # rows of each matrix follow its own basis ordering; reindex to ``basis``
    pos = {m: i for i, m in enumerate(basis)}
    M = []
    for mm in mats:
        perm = [pos[b] for b in mm.basis]
        A = [[0] * dim for _ in range(dim)]
        for i, row in enumerate(mm.matrix.data):
            for j, v in enumerate(row):
                if v:
                    A[perm[i]][perm[j]] = int(v)
        M.append(A)

    def times(vec, v):
        out = [0] * dim
        A = M[v]
        for i, c in enumerate(vec):
            if c:
                for j, a in enumerate(A[i]):
                    if a:
                        out[j] = (out[j] + c * a) % q
        return out

    one = (0,) * n
    nf = {one: [1 if b == one else 0 for b in basis]}
    echelon: list[tuple[int, list[int], dict]] = []  # (pivot, vector, combination over staircase)
    staircase: list = []
    lex_polys: list[MPoly] = []
    lex_lms: list = []
    heap = [(lex_order.key(one), one)]
    seen = {one}
    while heap:
        _, m = heapq.heappop(heap)
        if any(mono_divides(l, m) for l in lex_lms):
            continue
        if budget is not None:
            budget.tick(dim)
        if m not in nf:
            for v in range(n):
                if m[v]:
                    prev = m[:v] + (m[v] - 1,) + m[v + 1:]
                    if prev in nf:
                        nf[m] = times(nf[prev], v)
                        break
        vec = list(nf[m])
        combo = {m: 1}
        for p, row, rc in echelon:
            c = vec[p]
            if c:
                vec = [(a - c * b) % q for a, b in zip(vec, row)]
                for s, k in rc.items():
                    combo[s] = (combo.get(s, 0) - c * k) % q
        lead = next((j for j, c in enumerate(vec) if c), None)
        if lead is None:
            lex_polys.append(MPoly(ring, combo))
            lex_lms.append(m)
            continue
        inv = pow(vec[lead], -1, q)
        echelon.append((lead, [a * inv % q for a in vec], {s: k * inv % q for s, k in combo.items()}))
        staircase.append(m)
        for v in range(n):
            t = m[:v] + (m[v] + 1,) + m[v + 1:]
            if t not in seen:
                seen.add(t)
                heapq.heappush(heap, (lex_order.key(t), t))
    lex_polys.sort(key=lambda f: lex_order.key(f.lm(lex_order)), reverse=True)
    return PolySystem(ring, [f.monic(lex_order) for f in lex_polys])


def is_shape_position(G_lex, lex_order: TermOrder) -> bool:
    """{x_i - g_i(x_last)} plus one univariate in the smallest variable."""
    G = as_list(G_lex)
    ring = ring_of(G_lex)
    last = lex_order.perm[-1]
    seen = set()
    for f in G:
        lm = f.lm(lex_order)
        v = pure_power_var(lm)
        if v is None:
            return False
        if v == last:
            if f.variables() != {last}:
                return False
        elif lm[v] != 1 or not f.variables() <= {v, last} or any(m[v] > 1 for m in f.terms):
            return False
        seen.add(v)
    return len(seen) == ring.n and len(G) == ring.n


def solve_lex(G_lex, lex_order: TermOrder, seed: int = 0) -> list[tuple[int, ...]]:
    """F_q-points of a zero-dimensional LEX basis by back substitution."""
    G = [g for g in as_list(G_lex) if g]
    ring = G[0].ring
    q = ring.q
    rank = {v: k for k, v in enumerate(lex_order.perm)}
    by_var: dict[int, list[MPoly]] = {}
    for g in G:
        top = min(g.variables(), key=lambda v: rank[v]) if g.variables() else None
        if top is None:
            return []
        by_var.setdefault(top, []).append(g)
    order = list(reversed(lex_order.perm))  # smallest first
    points = [dict()]
    for v in order:
        nxt = []
        for pt in points:
            gs = []
            for g in by_var.get(v, []):
                h = g.subs(pt) if pt else g
                coeffs = [0] * (h.degree() + 1) if h else [0]
                for m, c in h.terms.items():
                    coeffs[m[v]] = c
                gs.append(UniPoly(ring.field, coeffs))
            g = UniPoly(ring.field, [])
            for u in gs:
                g = u if g.is_zero() else g.gcd(u)
            if g.is_zero():
                raise NotZeroDimensional(f"no univariate constraint on {ring.names[v]}")
            for a in roots_int(field_equation_gcd(g), seed=seed):
                nxt.append({**pt, v: a})
        points = nxt
    return sorted(tuple(pt[i] % q for i in range(ring.n)) for pt in points)


# -- key recovery -------------------------------------------------------------

@dataclass
class AttackReport:
    cipher: str
    strategy: str
    candidates: list
    verified: bool
    timings: dict = dc_field(default_factory=dict)
    branches: int = 0
    roots_per_step: list = dc_field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "cipher": self.cipher,
            "strategy": self.strategy,
            "candidates": [[str(v) for v in _flatten(c)] for c in self.candidates],
            "verified": self.verified,
            "timings_s": {k: round(v, 6) for k, v in self.timings.items()},
            "branches": self.branches,
            "roots_per_step": self.roots_per_step,
        }


def _flatten(c):
    out = []
    for v in c:
        if isinstance(v, (list, tuple)):
            out.extend(v)
        else:
            out.append(v)
    return out


def recover_ciminion_key(params: cim.CiminionParams, sample: cim.CiminionSample,
                         opts: SolveOptions | None = None, strategy: str = "auto") -> AttackReport:
    """Key pairs (K1, K2) consistent with the sample, each re-verified by encryption."""
    opts = opts or SolveOptions()
    if strategy == "auto":
        strategy = "bariant" if params.variant == cim.STANDARD else "eigen"
    timings = {}
    t0 = time.perf_counter()
    keys: set[tuple[int, int]] = set()
    stats = _SolveStats()
    if strategy == "bariant":
        f = cim.bariant_polynomial(params, sample)
        roots = roots_int(field_equation_gcd(f), seed=opts.seed)
        stats.roots_seen.append(len(roots))
        for x in roots[: opts.N]:
            stats.branches += 1
            nonce, k1, k2 = cim.invert_state(params, sample, x)
            if nonce == sample.nonce:
                keys.add((k1, k2))
    elif strategy == "eigen":
        model = cim.build_model(params, sample)
        gb = cim.ciminion_gb(model)
        timings["groebner_basis"] = time.perf_counter() - t0
        small = cim.downsize(gb)
        sols = eigen_solve(small, TermOrder.drl(small.ring.n), opts, stats=stats)
        affine = [p for p in gb if p.degree() == 1]
        order = model.order
        for s in sols:
            point = [0] * model.ring.n
            for name, v in zip(small.ring.names, s):
                point[model.ring.index[name]] = v
            for p in affine:
                lm = p.lm(order)
                v = lm.index(1)
                c = p.terms[lm]
                point[v] = (-(p - model.ring.gen(v) * c).evaluate(point) * pow(c, -1, params.field.q)) % params.field.q
            keys.add((point[0], point[1]))
    else:
        raise ValueError(f"unknown strategy {strategy}")
    timings["solve"] = time.perf_counter() - t0
    good = sorted(k for k in keys
                  if cim.encrypt(params, k, sample.nonce, (sample.p1, sample.p2)) == (sample.c1, sample.c2))
    if not good:
        raise NoSolution("no key reproduces the sample")
    return AttackReport("ciminion", strategy, good, True, timings, stats.branches, stats.roots_seen)


def recover_hydra_key(params: hyd.HydraParams, sample: hyd.HydraSamplePair,
                      opts: SolveOptions | None = None) -> AttackReport:
    """Keys k with body states (y, z) reproducing both outputs."""
    opts = opts or SolveOptions()
    timings = {}
    t0 = time.perf_counter()
    red = hyd.reduce_model(hyd.build_model(params, sample))
    timings["reduction"] = time.perf_counter() - t0
    order = TermOrder.drl(red.gb.ring.n)
    stats = _SolveStats()
    strategy = "eigen"
    try:
        sols = eigen_solve(red.gb, order, opts, extras=red.extras, stats=stats)
    except ShapeViolation:
        strategy = "fglm"
        lex = TermOrder.lex(red.gb.ring.n)
        pts = solve_lex(fglm(red.gb, lex, order, opts.budget), lex, opts.seed)
        sols = [p for p in pts if all(e.evaluate(p) == 0 for e in red.extras)]
    timings["solve"] = time.perf_counter() - t0 - timings["reduction"]
    good = []
    for s in sols:
        k, y, z = red.key_and_state(s)
        c1, c2 = hyd.heads_sample(params, k, y, z)
        if tuple(c1) == tuple(sample.c1) and tuple(c2) == tuple(sample.c2):
            good.append((tuple(k), tuple(y), tuple(z)))
    if not good:
        raise NoSolution("no key reproduces the outputs")
    return AttackReport("hydra", strategy, sorted(set(good)), True, timings, stats.branches, stats.roots_seen)
