"""Hydra heads, the two-sample iterated model and its reduction to a quadratic DRL basis.

Pipeline: ``build_model`` -> ``transform`` (one quadratic per head round) ->
``eliminate_affine`` (2r + 2 quadratics in 2r - 2 variables) ->
``change_of_coordinates`` (2r - 2 polynomials x^_i^2 + affine, plus 4 extras).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra.field import PrimeField
from .algebra.matrix import DenseMatrix, rref
from .constants import DEFAULT_SEED, as_seed, field_stream
from .errors import AffineRankDeficit, ChangeOfCoordinatesFailed, InvalidParams
from .mpoly.poly import (
    MPoly,
    PolyRing,
    PolySystem,
    TermOrder,
    linear_combination,
    matrix_apply,
    top_component,
)

M_E_INSTANCE = [[3, 2, 1, 1], [1, 3, 2, 1], [1, 1, 3, 2], [2, 1, 1, 3]]
M_I_INSTANCE = [[1, 1, 1, 1], [1, 4, 1, 1], [3, 1, 3, 1], [4, 1, 1, 2]]
M_J_INSTANCE = [
    [3, 1, 1, 1, 1, 1, 1, 1],
    [7, 3, 1, 1, 1, 1, 1, 1],
    [4, 1, 4, 1, 1, 1, 1, 1],
    [3, 1, 1, 8, 1, 1, 1, 1],
    [7, 1, 1, 1, 7, 1, 1, 1],
    [8, 1, 1, 1, 1, 5, 1, 1],
    [5, 1, 1, 1, 1, 1, 2, 1],
    [4, 1, 1, 1, 1, 1, 1, 6],
]

HEAD_SIGNS = (1, 1, 1, 1, -1, -1, -1, -1)
Y_SIGNS = (1, -1, 1, -1)
Z_SIGNS = (1, 1, -1, -1)


def circulant(row: Sequence[int]) -> list[list[int]]:
    """Right-shift circulant: row i is ``row`` rotated right by i."""
    n = len(row)
    return [[row[(j - i) % n] for j in range(n)] for i in range(n)]


def block_diag(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    a, b = len(A), len(B)
    return [list(r) + [0] * b for r in A] + [[0] * a + list(r) for r in B]


def head_constants(seed: bytes | str, r_H: int, field: PrimeField) -> list[list[int]]:
    stream = field_stream(as_seed(seed) + b"/hydra-head", b"hydra", field.q)
    return [[next(stream) for _ in range(8)] for _ in range(r_H)]


@dataclass(frozen=True)
class HydraParams:
    field: PrimeField
    r_H: int
    M_E: tuple
    M_I: tuple
    M_J: tuple
    constants: tuple  # r_H vectors of length 8
    c_R: tuple = (0,) * 8
    seed: bytes = DEFAULT_SEED

    def __post_init__(self):
        if self.r_H < 2:
            raise InvalidParams("r_H must be at least 2")
        if len(self.constants) != self.r_H or any(len(c) != 8 for c in self.constants):
            raise InvalidParams("one 8-vector of constants per round")
        if len(self.c_R) != 8:
            raise InvalidParams("rolling constant must have length 8")
        for name, M, n in (("M_E", self.M_E, 4), ("M_I", self.M_I, 4), ("M_J", self.M_J, 8)):
            if len(M) != n or any(len(r) != n for r in M):
                raise InvalidParams(f"{name} must be {n}x{n}")
            if not DenseMatrix.from_rows(self.field, M).is_invertible():
                raise InvalidParams(f"{name} is singular mod {self.field.q}")

    @classmethod
    def generate(cls, field: PrimeField, r_H: int, seed: bytes | str = DEFAULT_SEED,
                 M_E=None, M_I=None, M_J=None, c_R=None) -> HydraParams:
        seed = as_seed(seed)
        tup = lambda M: tuple(tuple(int(v) % field.q for v in r) for r in M)
        return cls(
            field, r_H,
            tup(M_E or M_E_INSTANCE), tup(M_I or M_I_INSTANCE), tup(M_J or M_J_INSTANCE),
            tuple(tuple(c) for c in head_constants(seed, r_H, field)),
            tuple(c_R) if c_R is not None else (0,) * 8,
            seed,
        )

    @property
    def M_R(self) -> list[list[int]]:
        return block_diag(self.M_I, self.M_I)

    def matrix(self, name: str) -> DenseMatrix:
        M = self.M_R if name == "M_R" else getattr(self, name)
        return DenseMatrix.from_rows(self.field, M)


@dataclass(frozen=True)
class HydraSamplePair:
    c1: tuple
    c2: tuple
    key: tuple | None = None
    y: tuple | None = None
    z: tuple | None = None

    def witness_known(self) -> bool:
        return self.key is not None and self.y is not None and self.z is not None


# -- straight-line evaluation -------------------------------------------------

def _mv(M, v, q) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) % q for row in M]


def extended_key(params: HydraParams, k: Sequence[int]) -> list[int]:
    q = params.field.q
    k = [v % q for v in k]
    return k + _mv(params.M_E, k, q)


def head_round(params: HydraParams, i: int, x: Sequence[int], kp: Sequence[int]) -> list[int]:
    q = params.field.q
    s = sum(sg * v for sg, v in zip(HEAD_SIGNS, x))
    f = s * s
    t = _mv(params.M_J, [v + f for v in x], q)
    c = params.constants[i - 1]
    return [(t[j] + kp[j] + c[j]) % q for j in range(8)]


def heads(params: HydraParams, k: Sequence[int], state: Sequence[int]) -> list[int]:
    kp = extended_key(params, k)
    for i in range(1, params.r_H + 1):
        state = head_round(params, i, state, kp)
    return list(state)


def rolling(params: HydraParams, state: Sequence[int]) -> list[int]:
    """R(y, z) + c_R."""
    q = params.field.q
    y, z = state[:4], state[4:]
    gy = sum(s * v for s, v in zip(Y_SIGNS, y)) * sum(s * v for s, v in zip(Z_SIGNS, z))
    gz = sum(s * v for s, v in zip(Y_SIGNS, z)) * sum(s * v for s, v in zip(Z_SIGNS, y))
    t = _mv(params.M_R, [v + gy for v in y] + [v + gz for v in z], q)
    return [(a + b) % q for a, b in zip(t, params.c_R)]


def heads_sample(params: HydraParams, k: Sequence[int], y: Sequence[int], z: Sequence[int]) -> tuple[list[int], list[int]]:
    """The first two outputs for body state (y, z)."""
    q = params.field.q
    s0 = [v % q for v in list(y) + list(z)]
    c1 = [(a + b) % q for a, b in zip(heads(params, k, s0), s0)]
    s1 = rolling(params, s0)
    c2 = [(a + b) % q for a, b in zip(heads(params, k, s1), s1)]
    return c1, c2


def make_sample(params: HydraParams, k, y, z) -> HydraSamplePair:
    c1, c2 = heads_sample(params, k, y, z)
    q = params.field.q
    return HydraSamplePair(tuple(c1), tuple(c2), tuple(v % q for v in k),
                           tuple(v % q for v in y), tuple(v % q for v in z))


# -- polynomial model ---------------------------------------------------------

def variable_names(r_H: int) -> list[str]:
    names = [f"y{l}" for l in range(1, 5)] + [f"z{l}" for l in range(1, 5)]
    for i in range(1, r_H):
        names += [f"x1_{i}_{l}" for l in range(1, 9)]
    for i in range(r_H):
        names += [f"x2_{i}_{l}" for l in range(1, 9)]
    return names + [f"k{l}" for l in range(1, 5)]


@dataclass
class HydraModel:
    params: HydraParams
    sample: HydraSamplePair
    ring: PolyRing
    system: PolySystem
    order: TermOrder

    def witness(self, k=None, y=None, z=None) -> list[int]:
        """True values of every model variable."""
        p = self.params
        q = p.field.q
        k = k if k is not None else self.sample.key
        y = y if y is not None else self.sample.y
        z = z if z is not None else self.sample.z
        kp = extended_key(p, k)
        s = [v % q for v in list(y) + list(z)]
        point = list(s)
        for i in range(1, p.r_H):
            s = head_round(p, i, s, kp)
            point += s
        s = rolling(p, point[:8])
        for i in range(p.r_H):
            point += s
            s = head_round(p, i + 1, s, kp)
        return point + [v % q for v in k]


def _head_image(params: HydraParams, i: int, x: Sequence[MPoly], kp: Sequence[MPoly]) -> list[MPoly]:
    ring = x[0].ring
    L = linear_combination(HEAD_SIGNS, x)
    f = L * L
    inner = [v + f for v in x]
    c = params.constants[i - 1]
    return [linear_combination(row, inner, ring) + kp[j] + c[j] for j, row in enumerate(params.M_J)]


def build_model(params: HydraParams, sample: HydraSamplePair) -> HydraModel:
    r = params.r_H
    ring = PolyRing(params.field, variable_names(r))
    g = ring.gens
    yz = g[:8]
    x1 = [g[8 + 8 * (i - 1): 16 + 8 * (i - 1)] for i in range(1, r)]
    base2 = 8 + 8 * (r - 1)
    x2 = [g[base2 + 8 * i: base2 + 8 * (i + 1)] for i in range(r)]
    k = g[-4:]
    kp = list(k) + matrix_apply(params.M_E, k)
    polys = []
    # first sample
    inp = yz
    for i in range(1, r + 1):
        img = _head_image(params, i, inp, kp)
        if i < r:
            out = x1[i - 1]
            polys += [a - b for a, b in zip(img, out)]
            inp = out
        else:
            polys += [a + b - c for a, b, c in zip(img, yz, sample.c1)]
    # rolling
    y, z = yz[:4], yz[4:]
    gy = linear_combination(Y_SIGNS, y) * linear_combination(Z_SIGNS, z)
    gz = linear_combination(Y_SIGNS, z) * linear_combination(Z_SIGNS, y)
    inner = [v + gy for v in y] + [v + gz for v in z]
    rimg = matrix_apply(params.M_R, inner)
    polys += [a + c - b for a, c, b in zip(rimg, params.c_R, x2[0])]
    # second sample
    inp = x2[0]
    for i in range(1, r + 1):
        img = _head_image(params, i, inp, kp)
        if i < r:
            out = x2[i]
            polys += [a - b for a, b in zip(img, out)]
            inp = out
        else:
            polys += [a + b - c for a, b, c in zip(img, x2[0], sample.c2)]
    return HydraModel(params, sample, ring, PolySystem(ring, polys), TermOrder.drl(ring.n))


# -- Feistel-like transformation ----------------------------------------------

def a_matrix(n: int) -> list[list[int]]:
    """Identity with -1 in the last column above the diagonal."""
    return [[1 if j == i else (-1 if j == n - 1 and i < n - 1 else 0) for j in range(n)] for i in range(n)]


def head_tag(j: int, i: int) -> str:
    return f"head{j}_{i}"


def transform(model: HydraModel) -> PolySystem:
    """G = {A_8 M_J^-1 f1^(i), B M_R^-1 f_R, A_8 M_J^-1 f2^(i)} with role tags.

    Tags: ``affine``, ``head{j}_{i}`` for the quadratic of head round i of sample j,
    ``roll_y`` / ``roll_z`` for the two rolling quadratics.
    """
    params = model.params
    r = params.r_H
    F = model.system.polys
    MJi = params.matrix("M_J").inverse()
    MRi = params.matrix("M_R").inverse()
    TJ = (DenseMatrix.from_rows(params.field, a_matrix(8)) @ MJi).tolist()
    B = block_diag(a_matrix(4), a_matrix(4))
    TR = (DenseMatrix.from_rows(params.field, B) @ MRi).tolist()
    polys, tags = [], []

    def head_block(block, j, i):
        out = matrix_apply(TJ, block)
        polys.extend(out)
        tags.extend(["affine"] * 7 + [head_tag(j, i)])

    for i in range(1, r + 1):
        head_block(F[8 * (i - 1): 8 * i], 1, i)
    out = matrix_apply(TR, F[8 * r: 8 * r + 8])
    polys.extend(out)
    tags.extend(["affine"] * 3 + ["roll_y"] + ["affine"] * 3 + ["roll_z"])
    base = 8 * r + 8
    for i in range(1, r + 1):
        head_block(F[base + 8 * (i - 1): base + 8 * i], 2, i)
    return PolySystem(model.ring, polys, tags)


def head_quadratics(G: PolySystem) -> list[tuple[str, MPoly]]:
    return [(t, p) for t, p in zip(G.tags, G.polys) if t.startswith("head")]


def linear_sqrt(Q: MPoly) -> MPoly:
    """A linear form L with Q = c * L^2 for a homogeneous quadratic Q (L normalised)."""
    ring = Q.ring
    q = ring.q
    if Q.is_zero() or not Q.is_homogeneous() or Q.degree() != 2:
        raise ValueError("expected a nonzero homogeneous quadratic")
    squares = {m.index(2): c for m, c in Q.terms.items() if 2 in m}
    if not squares:
        raise ValueError("quadratic is not a square of a linear form")
    v = min(squares)
    a = squares[v]
    inv2a = pow(2 * a, -1, q)
    coeffs = {v: 1}
    for m, c in Q.terms.items():
        if m[v] == 1:
            w = next(i for i, e in enumerate(m) if e and i != v)
            coeffs[w] = c * inv2a % q
    L = ring.linear(coeffs)
    if L * L * a != Q:
        raise ValueError("quadratic is not a square of a linear form")
    return L


def generic_coordinates_check(G: PolySystem, params: HydraParams | None = None) -> tuple[int, bool]:
    """Rank of the linear system certifying generic coordinates; full iff 16 r + 4."""
    ring = G.ring
    rows = []
    for t, p in zip(G.tags, G.polys):
        if t == "affine":
            rows.append(p.linear_coeffs())
        elif t.startswith("head"):
            rows.append(linear_sqrt(top_component(p)).linear_coeffs())
    M = DenseMatrix.from_rows(ring.field, [[row.get(j, 0) for j in range(ring.n)] for row in rows])
    rank = M.rank()
    return rank, rank == ring.n


# -- affine elimination -------------------------------------------------------

@dataclass
class AffineElimination:
    """Old variables as affine polynomials in the surviving variables."""

    source: PolyRing
    ring: PolyRing
    images: list  # one MPoly of ``ring`` per source variable
    pivots: list

    def lift(self, point: Sequence[int]) -> list[int]:
        return [img.evaluate(point) for img in self.images]

    def project(self, point: Sequence[int]) -> list[int]:
        return [point[self.source.index[nm]] for nm in self.ring.names]

    def apply(self, f: MPoly) -> MPoly:
        return f.compose(self.images, self.ring.one(), self.ring.zero())


def eliminate_affine(G: PolySystem) -> tuple[PolySystem, AffineElimination]:
    """Eliminate 14 r + 6 variables with the affine members of G."""
    ring = G.ring
    n = ring.n
    r = (n - 4) // 16
    expected = 14 * r + 6
    affine = [p for t, p in zip(G.tags, G.polys) if t == "affine"]
    rows = []
    for p in affine:
        lin = p.linear_coeffs()
        rows.append([lin.get(j, 0) for j in range(n)] + [p.constant_term()])
    R, rank, piv = rref(DenseMatrix.from_rows(ring.field, rows))
    top_rank = sum(1 for c in piv if c < n)
    if top_rank != expected or rank != top_rank:
        raise AffineRankDeficit(top_rank, expected)
    pivset = set(piv)
    keep = [j for j in range(n) if j not in pivset]
    new = PolyRing(ring.field, [ring.names[j] for j in keep])
    gens = new.gens
    images: list = [None] * n
    for pos, j in enumerate(keep):
        images[j] = gens[pos]
    q = ring.q
    for k, c in enumerate(piv):
        row = R.data[k]
        coeffs = {pos: -int(row[j]) % q for pos, j in enumerate(keep) if row[j]}
        images[c] = new.linear(coeffs, -int(row[n]) % q)
    elim = AffineElimination(ring, new, images, list(piv))
    polys, tags = [], []
    for t, p in zip(G.tags, G.polys):
        if t != "affine":
            polys.append(elim.apply(p))
            tags.append(t)
    return PolySystem(new, polys, tags), elim


# -- change of coordinates ----------------------------------------------------

def selection_order(r_H: int) -> list[str]:
    return ([head_tag(1, i) for i in range(3, r_H + 1)] + [head_tag(2, i) for i in range(1, r_H + 1)]
            + [head_tag(1, 1), head_tag(1, 2)])


@dataclass
class CoordinateChange:
    """x^ = M x_nl over the surviving variables."""

    M: DenseMatrix
    M_inv: DenseMatrix
    selected: list  # head tags, x^_i comes from selected[i - 1]
    source: PolyRing
    ring: PolyRing
    images: list = dc_field(default_factory=list)  # x_nl as linear forms in x^

    def to_source(self, xhat: Sequence[int]) -> list[int]:
        return [int(v) for v in self.M_inv.apply(list(xhat))]

    def from_source(self, x: Sequence[int]) -> list[int]:
        return [int(v) for v in self.M.apply(list(x))]

    def apply(self, f: MPoly) -> MPoly:
        return f.compose(self.images, self.ring.one(), self.ring.zero())


def change_of_coordinates(reduced: PolySystem) -> tuple[PolySystem, PolySystem, CoordinateChange]:
    ring = reduced.ring
    field = ring.field
    m = ring.n
    r = (m + 2) // 2
    heads_by_tag = {t: p for t, p in zip(reduced.tags, reduced.polys) if t.startswith("head")}
    forms = {}
    for t, p in heads_by_tag.items():
        try:
            forms[t] = linear_sqrt(top_component(p))
        except ValueError as exc:
            raise ChangeOfCoordinatesFailed(f"{t}: {exc}") from None
    selected, rows = [], []
    for t in selection_order(r):
        if t not in forms:
            continue
        lin = forms[t].linear_coeffs()
        cand = rows + [[lin.get(j, 0) for j in range(m)]]
        if DenseMatrix.from_rows(field, cand).rank() == len(cand):
            rows = cand
            selected.append(t)
        if len(rows) == m:
            break
    if len(rows) != m:
        raise ChangeOfCoordinatesFailed(f"independent head forms: {len(rows)} of {m}")
    M = DenseMatrix.from_rows(field, rows)
    Minv = M.inverse()
    hat = PolyRing(field, [f"xh{i}" for i in range(1, m + 1)])
    images = [hat.linear({j: int(Minv[c, j]) for j in range(m) if Minv[c, j]}) for c in range(m)]
    change = CoordinateChange(M, Minv, selected, ring, hat, images)
    order = TermOrder.drl(m)
    gb = []
    for i, t in enumerate(selected):
        g = change.apply(heads_by_tag[t]).monic(order)
        lm = tuple(2 if j == i else 0 for j in range(m))
        if g.lm(order) != lm:
            raise ChangeOfCoordinatesFailed(f"{t} does not lead with xh{i + 1}^2")
        gb.append(g)
    extra_tags = [t for t in reduced.tags if t not in selected]
    extras = [change.apply(p).monic(order) for t, p in zip(reduced.tags, reduced.polys) if t not in selected]
    return (PolySystem(hat, gb, ["gb"] * len(gb)), PolySystem(hat, extras, extra_tags), change)


@dataclass
class HydraReduction:
    """Every stage of the reduction of a model, with the maps to pull solutions back."""

    model: HydraModel
    transformed: PolySystem
    reduced: PolySystem
    elimination: AffineElimination
    gb: PolySystem
    extras: PolySystem
    change: CoordinateChange

    def pullback(self, xhat: Sequence[int]) -> list[int]:
        return self.elimination.lift(self.change.to_source(xhat))

    def key_and_state(self, xhat: Sequence[int]) -> tuple[list[int], list[int], list[int]]:
        full = self.pullback(xhat)
        return full[-4:], full[:4], full[4:8]

    def hat_witness(self) -> list[int]:
        point = self.model.witness()
        return self.change.from_source(self.elimination.project(point))

    def combined(self) -> PolySystem:
        """gb together with the extras: 2 r + 2 quadratics in 2 r - 2 variables."""
        return PolySystem(self.gb.ring, list(self.gb) + list(self.extras))


def reduce_model(model: HydraModel) -> HydraReduction:
    G = transform(model)
    reduced, elim = eliminate_affine(G)
    gb, extras, change = change_of_coordinates(reduced)
    return HydraReduction(model, G, reduced, elim, gb, extras, change)
