"""The Ciminion PRF (first key pair), its iterated model and Groebner bases.

Round i maps (x, y, z) to A_i (x, y, u) + c^(i) with u = z + x*y (+ key term)
and A_i = [[0, 0, 1], [1, c4, c4], [0, 1, 1]].  Variants add a linear key term
a*K1 + b*K2 to u:

* ``fix``: (alpha, beta) in the rounds listed in ``fix_rounds`` (default: round r_C);
* ``ciminion2``: (1, 1) in every round i >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra.field import PrimeField
from .algebra.matrix import DenseMatrix, rref
from .algebra.unipoly import UniPoly
from .constants import DEFAULT_SEED, field_stream
from .errors import InvalidParams, ShapeUnavailable, VariantUnsupported
from .mpoly.groebner import reduce
from .mpoly.poly import MPoly, PolyRing, PolySystem, TermOrder, pure_power_var

STANDARD = "standard"
FIX = "fix"
CIMINION2 = "ciminion2"
VARIANTS = (STANDARD, FIX, CIMINION2)

Constants = list[tuple[int, int, int, int]]


def derive_constants(seed: bytes | str, r: int, field: PrimeField) -> Constants:
    """Per-round (c1, c2, c3, c4); c4 is resampled until it avoids {0, 1}."""
    if r < 1:
        raise ValueError("need at least one round")
    stream = field_stream(seed, b"ciminion", field.q)
    out = []
    for _ in range(r):
        c1, c2, c3 = next(stream), next(stream), next(stream)
        c4 = next(stream)
        while c4 in (0, 1):
            c4 = next(stream)
        out.append((c1, c2, c3, c4))
    return out


@dataclass(frozen=True)
class CiminionParams:
    field: PrimeField
    r_C: int
    r_E: int
    constants: tuple
    variant: str = STANDARD
    alpha: int = 1
    beta: int = 1
    fix_rounds: tuple | None = None
    seed: bytes = DEFAULT_SEED

    def __post_init__(self):
        q = self.field.q
        if self.r_C < 1 or self.r_E < 1:
            raise InvalidParams("r_C and r_E must be at least 1")
        if self.variant not in VARIANTS:
            raise InvalidParams(f"unknown variant {self.variant}")
        if len(self.constants) != self.rounds:
            raise InvalidParams("one constant tuple per round")
        for c in self.constants:
            if len(c) != 4 or c[3] % q in (0, 1):
                raise InvalidParams("every c4 must avoid {0, 1}")
        if self.variant == FIX:
            if self.alpha % q == 0 or self.beta % q == 0:
                raise InvalidParams("alpha and beta must be nonzero")
            for i in self.key_rounds():
                if not 1 <= i <= self.rounds:
                    raise InvalidParams(f"fix round {i} out of range")

    @classmethod
    def generate(cls, field: PrimeField, r_C: int, r_E: int, seed: bytes | str = DEFAULT_SEED,
                 variant: str = STANDARD, **kw) -> CiminionParams:
        seed = seed if isinstance(seed, bytes) else str(seed).encode()
        consts = tuple(derive_constants(seed, r_C + r_E, field))
        return cls(field, r_C, r_E, consts, variant, seed=seed, **kw)

    @property
    def rounds(self) -> int:
        return self.r_C + self.r_E

    def key_rounds(self) -> tuple:
        if self.variant == FIX:
            return self.fix_rounds if self.fix_rounds is not None else (self.r_C,)
        if self.variant == CIMINION2:
            return tuple(range(2, self.rounds + 1))
        return ()

    def key_coeffs(self, i: int) -> tuple[int, int] | None:
        """(a, b) such that round i adds a*K1 + b*K2 to the Toffoli output."""
        if self.variant == FIX and i in self.key_rounds():
            return self.alpha % self.field.q, self.beta % self.field.q
        if self.variant == CIMINION2 and i >= 2:
            return 1, 1
        return None


@dataclass(frozen=True)
class CiminionSample:
    nonce: int
    p1: int
    p2: int
    c1: int
    c2: int


# -- straight-line evaluation -------------------------------------------------

def round_fn(params: CiminionParams, i: int, state: Sequence[int], keys: Sequence[int] = (0, 0)) -> tuple[int, int, int]:
    q = params.field.q
    x, y, z = state
    c1, c2, c3, c4 = params.constants[i - 1]
    u = z + x * y
    kc = params.key_coeffs(i)
    if kc is not None:
        u += kc[0] * keys[0] + kc[1] * keys[1]
    return (u + c1) % q, (x + c4 * y + c4 * u + c2) % q, (y + u + c3) % q


def inverse_round(params: CiminionParams, i: int, state: Sequence[int]) -> tuple[int, int, int]:
    """Inverse of a key-free round."""
    q = params.field.q
    c1, c2, c3, c4 = params.constants[i - 1]
    w1, w2, w3 = state[0] - c1, state[1] - c2, state[2] - c3
    x = (w2 - c4 * w3) % q
    y = (w3 - w1) % q
    z = (w1 - x * y) % q
    return x, y, z


def rol(state: Sequence[int], q: int) -> tuple[int, int, int]:
    x, y, z = state
    return (z + x * y) % q, x % q, y % q


def trace(params: CiminionParams, keys: Sequence[int], nonce: int) -> list[tuple[int, int, int]]:
    """States after each round, starting from (nonce, K1, K2)."""
    q = params.field.q
    state = (nonce % q, keys[0] % q, keys[1] % q)
    out = []
    for i in range(1, params.rounds + 1):
        state = round_fn(params, i, state, keys)
        out.append(state)
    return out


def encrypt(params: CiminionParams, keys: Sequence[int], nonce: int, plaintext: Sequence[int]) -> tuple[int, int]:
    q = params.field.q
    s = trace(params, keys, nonce)[-1]
    return (plaintext[0] + s[0]) % q, (plaintext[1] + s[1]) % q


def encrypt_multi(params: CiminionParams, keys: Sequence[int], nonce: int,
                  plaintext: Sequence[int]) -> list[int]:
    """Encrypt 2*l elements with key pairs K1..K_{2l}; pairs after the first go through rol."""
    q = params.field.q
    if len(plaintext) % 2 or len(keys) < len(plaintext):
        raise ValueError("need one key per plaintext element, in pairs")
    state = (nonce % q, keys[0] % q, keys[1] % q)
    for i in range(1, params.r_C + 1):
        state = round_fn(params, i, state, keys)
    out = []
    for j in range(0, len(plaintext), 2):
        if j:
            state = rol(((state[0] + keys[j]) % q, (state[1] + keys[j + 1]) % q, state[2]), q)
        s = state
        for i in range(params.r_C + 1, params.rounds + 1):
            s = round_fn(params, i, s, keys)
        out += [(plaintext[j] + s[0]) % q, (plaintext[j + 1] + s[1]) % q]
    return out


def make_sample(params: CiminionParams, keys: Sequence[int], nonce: int, plaintext: Sequence[int]) -> CiminionSample:
    c1, c2 = encrypt(params, keys, nonce, plaintext)
    q = params.field.q
    return CiminionSample(nonce % q, plaintext[0] % q, plaintext[1] % q, c1, c2)


# -- polynomial model ---------------------------------------------------------

def variable_names(r: int) -> list[str]:
    names = ["y1", "y2"]
    for i in range(1, r):
        names += [f"x1_{i}", f"x2_{i}", f"x3_{i}"]
    return names + ["x"]


def var_index(r: int, i: int, j: int) -> int:
    """Index of x_j^(i) for 1 <= i <= r - 1; i = r, j = 3 gives x."""
    if i == r:
        if j != 3:
            raise ValueError("only x is free in the last round")
        return 3 * r - 1
    return 2 + 3 * (i - 1) + (j - 1)


@dataclass
class CiminionModel:
    params: CiminionParams
    sample: CiminionSample
    ring: PolyRing
    system: PolySystem
    order: TermOrder
    rounds: list = dc_field(default_factory=list)  # per round: (input polys, output polys)

    def witness(self, keys: Sequence[int]) -> list[int]:
        """The true assignment of all model variables."""
        tr = trace(self.params, keys, self.sample.nonce)
        r = self.params.rounds
        point = [keys[0] % self.params.field.q, keys[1] % self.params.field.q]
        for i in range(1, r):
            point += list(tr[i - 1])
        return point + [tr[-1][2]]


def _round_polys(params: CiminionParams, i: int, inp: Sequence[MPoly], y1: MPoly, y2: MPoly) -> list[MPoly]:
    c1, c2, c3, c4 = params.constants[i - 1]
    x, y, z = inp
    u = z + x * y
    kc = params.key_coeffs(i)
    if kc is not None:
        u = u + y1 * kc[0] + y2 * kc[1]
    return [u + c1, x + y * c4 + u * c4 + c2, y + u + c3]


def build_model(params: CiminionParams, sample: CiminionSample) -> CiminionModel:
    r = params.rounds
    ring = PolyRing(params.field, variable_names(r))
    g = ring.gens
    y1, y2 = g[0], g[1]
    polys = []
    rounds = []
    inp = [ring.const(sample.nonce), y1, y2]
    for i in range(1, r + 1):
        if i < r:
            out = [g[var_index(r, i, j)] for j in (1, 2, 3)]
        else:
            out = [ring.const(sample.c1 - sample.p1), ring.const(sample.c2 - sample.p2), g[3 * r - 1]]
        img = _round_polys(params, i, inp, y1, y2)
        polys += [a - b for a, b in zip(img, out)]
        rounds.append((inp, out))
        inp = out
    return CiminionModel(params, sample, ring, PolySystem(ring, polys), TermOrder.drl(ring.n), rounds)


def _a_inv(c4: int, q: int) -> list[list[int]]:
    return [[0, 1, -c4 % q], [q - 1, 0, 1], [1, 0, 0]]


def _mat_vec(M: Sequence[Sequence[int]], v: Sequence[MPoly]) -> list[MPoly]:
    out = []
    for row in M:
        acc = v[0] * 0
        for a, p in zip(row, v):
            if a:
                acc = acc + p * a
        out.append(acc)
    return out


def linear_rref(polys: Sequence[MPoly], order: TermOrder) -> list[MPoly]:
    """Gauss-Jordan elimination of affine polynomials, columns ranked by ``order``."""
    if not polys:
        return []
    ring = polys[0].ring
    n = ring.n
    cols = list(order.perm)  # greatest variable first
    rows = []
    for p in polys:
        lin = p.linear_coeffs()
        rows.append([lin.get(v, 0) for v in cols] + [p.constant_term()])
    R, rank, piv = rref(DenseMatrix.from_rows(ring.field, rows))
    out = []
    for k in range(rank):
        row = R.data[k]
        out.append(ring.linear({cols[j]: int(row[j]) for j in range(n) if row[j]}, int(row[n])))
    return out


def ciminion_gb(model: CiminionModel) -> PolySystem:
    """DRL Groebner basis by the three-step construction.

    Leading monomials: y1, y2, x3_1, x1_i, x2_i (1 <= i <= r-1) for the affine
    part and x3_i^2 (2 <= i <= r-1), x^2 for the quadratic part.
    """
    params = model.params
    q = params.field.q
    r = params.rounds
    for c in params.constants:
        if c[3] % q in (0, 1):
            raise InvalidParams("c4 must avoid {0, 1}")
    order = model.order
    polys = model.system.polys
    # step 1: g^(i) = A_i^{-1} f^(i)
    g = [_mat_vec(_a_inv(params.constants[i][3], q), polys[3 * i:3 * i + 3]) for i in range(r)]
    # step 2: affine members, with the first-round combinations of the proof
    nonce = model.sample.nonce
    first = [g[0][0] + g[1][1], g[0][1], g[0][2] - g[0][1] * nonce]
    linear = first + [p for i in range(1, r) for p in g[i][:2]]
    L = linear_rref(linear, order)
    if len(L) != 2 * r + 1:
        raise InvalidParams("affine part is rank deficient")
    # step 3: quadratics reduced modulo the eliminated affine set
    quads = [reduce(g[i][2], L, order).monic(order) for i in range(1, r)]
    tags = ["affine"] * len(L) + ["quadratic"] * len(quads)
    return PolySystem(model.ring, L + quads, tags)


def quadratic_part(gb: PolySystem) -> list[MPoly]:
    if gb.tags is not None:
        return gb.tagged("quadratic")
    return [p for p in gb if p.degree() == 2]


def downsize(gb: PolySystem) -> PolySystem:
    """The r - 1 quadratics as a system in x3_2, ..., x3_{r-1}, x."""
    names = [nm for nm in gb.ring.names if nm == "x" or (nm.startswith("x3_") and nm != "x3_1")]
    ring = PolyRing(gb.ring.field, names)
    quads = [p.change_ring(ring) for p in quadratic_part(gb)]
    return PolySystem(ring, quads, ["quadratic"] * len(quads))


def _uni_to_mpoly(u: UniPoly, ring: PolyRing, var: int) -> MPoly:
    terms = {}
    for k, c in enumerate(u.coeffs):
        if c:
            e = [0] * ring.n
            e[var] = k
            terms[tuple(e)] = c
    return MPoly(ring, terms)


def lex_shape_basis(gb: PolySystem) -> PolySystem:
    """LEX basis {v - g_v(x)} + {f~(x)} by back substitution through the quadratic chain."""
    ring = gb.ring
    field = ring.field
    q = field.q
    order = TermOrder.drl(ring.n)
    r = ring.n // 3
    xi = ring.n - 1
    chain = [var_index(r, i, 3) for i in range(2, r)] + [xi]  # v_2, ..., v_{r-1}, x
    by_var = {}
    for p in quadratic_part(gb):
        v = pure_power_var(p.lm(order))
        by_var[v] = p
    if sorted(by_var) != sorted(chain):
        raise ShapeUnavailable("quadratic leading monomials do not match the round chain")
    X = UniPoly.x(field)
    images: dict[int, UniPoly] = {xi: X}
    # g^(i), i = r .. 3, determines v_{i-1} as a polynomial in x
    for k in range(len(chain) - 1, 0, -1):
        p = by_var[chain[k]]
        prev = chain[k - 1]
        allowed = set(chain[k - 1:])
        if not p.variables() <= allowed:
            raise ShapeUnavailable("affine part depends on earlier round variables")
        e = [0] * ring.n
        e[prev] = 1
        c = p.coeff(tuple(e))
        if c == 0 or any(m[prev] and m != tuple(e) for m in p.terms):
            raise ShapeUnavailable("round variable does not enter linearly")
        rest = p - ring.gen(prev) * c
        if not rest.variables() <= set(chain[k:]):
            raise ShapeUnavailable("affine part depends on earlier round variables")
        uni = rest.to_uni(_images_list(images, ring.n, field))
        images[prev] = uni * (-pow(c, -1, q) % q)
    head = by_var[chain[0]]
    if not head.variables() <= set(chain):
        raise ShapeUnavailable("first quadratic leaves the chain")
    f = head.to_uni(_images_list(images, ring.n, field)).monic()
    out = []
    for p in gb:
        if p.degree() != 1:
            continue
        lm = p.lm(order)
        v = lm.index(1)
        rest = p - ring.gen(v) * p.terms[lm]
        if not rest.variables() <= set(chain):
            raise ShapeUnavailable("affine member outside the chain")
        images[v] = (rest.to_uni(_images_list(images, ring.n, field)) * (-pow(p.terms[lm], -1, q) % q))
    lex = TermOrder.lex(ring.n)
    for v in range(ring.n):
        if v == xi:
            continue
        gv = images[v] % f
        out.append(ring.gen(v) - _uni_to_mpoly(gv, ring, xi))
    out.append(_uni_to_mpoly(f, ring, xi))
    out.sort(key=lambda p: lex.key(p.lm(lex)), reverse=True)
    return PolySystem(ring, out)


def _images_list(images: dict, n: int, field: PrimeField) -> list:
    zero = UniPoly(field, [])
    return [images.get(i, zero) for i in range(n)]


def lex_univariate(lex_basis: PolySystem) -> UniPoly:
    ring = lex_basis.ring
    xi = ring.n - 1
    for p in lex_basis:
        if p.variables() <= {xi}:
            coeffs = [0] * (p.degree() + 1)
            for m, c in p.terms.items():
                coeffs[m[xi]] = c
            return UniPoly(ring.field, coeffs)
    raise ShapeUnavailable("no univariate member")


def invert_state(params: CiminionParams, sample: CiminionSample, xval: int) -> tuple[int, int, int]:
    """Run all rounds backwards from (c1 - p1, c2 - p2, xval)."""
    q = params.field.q
    state = ((sample.c1 - sample.p1) % q, (sample.c2 - sample.p2) % q, xval % q)
    for i in range(params.rounds, 0, -1):
        state = inverse_round(params, i, state)
    return state


def bariant_polynomial(params: CiminionParams, sample: CiminionSample) -> UniPoly:
    """f(X) = f_1(X) - nonce where (f_1, f_2, f_3) is the backwards image of (c1 - p1, c2 - p2, X)."""
    if params.variant != STANDARD:
        raise VariantUnsupported("key additions block the inversion of the rounds")
    field = params.field
    w = [UniPoly.const(field, sample.c1 - sample.p1), UniPoly.const(field, sample.c2 - sample.p2),
         UniPoly.x(field)]
    for i in range(params.rounds, 0, -1):
        c1, c2, c3, c4 = params.constants[i - 1]
        w1, w2, w3 = w[0] - c1, w[1] - c2, w[2] - c3
        x = w2 - w3 * c4
        y = w3 - w1
        w = [x, y, w1 - x * y]
    return w[0] - sample.nonce
