"""JSON parameter and sample files.

All field elements are written as decimal strings so that 128-bit values
survive any JSON reader.  Seeds are stored as latin-1 text, which maps every
byte string to a str and back without loss.

Schemas (``kind`` discriminates):

ciminion-params
    q, r_C, r_E, variant, alpha, beta, fix_rounds (list or null), seed,
    constants (one [c1, c2, c3, c4] per round)
ciminion-sample
    nonce, p1, p2, c1, c2; optionally key [K1, K2]
hydra-params
    q, r_H, M_E, M_I, M_J (row-major), constants (one 8-vector per round),
    c_R, seed
hydra-sample
    c1, c2 (8-vectors); optionally key, y, z (4-vectors)
"""

from __future__ import annotations

import json
from pathlib import Path

from . import __version__
from . import ciminion as cim
from . import hydra as hyd
from .algebra.field import PrimeField


class SchemaError(ValueError):
    pass


def _s(v) -> str:
    return str(int(v))


def _i(v, name: str) -> int:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise SchemaError(f"{name}: expected a decimal string")
    try:
        return int(v)
    except ValueError:
        raise SchemaError(f"{name}: {v!r} is not a decimal integer") from None


def _vec(v, n: int | None, name: str) -> tuple:
    if not isinstance(v, list) or (n is not None and len(v) != n):
        raise SchemaError(f"{name}: expected a list of length {n}")
    return tuple(_i(x, name) for x in v)


def _mat(v, n: int, name: str) -> tuple:
    if not isinstance(v, list) or len(v) != n:
        raise SchemaError(f"{name}: expected {n} rows")
    return tuple(_vec(row, n, name) for row in v)


def _need(d: dict, keys, kind: str) -> None:
    if not isinstance(d, dict) or d.get("kind") != kind:
        raise SchemaError(f"expected a {kind} record")
    missing = [k for k in keys if k not in d]
    if missing:
        raise SchemaError(f"{kind}: missing {', '.join(missing)}")


def seed_text(seed: bytes) -> str:
    return seed.decode("latin-1")


def dump_json(obj, path: str | Path | None = None) -> str:
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: {e}") from None


# -- Ciminion -----------------------------------------------------------------

def ciminion_params_to_dict(p: cim.CiminionParams) -> dict:
    return {
        "kind": "ciminion-params",
        "version": __version__,
        "q": _s(p.field.q),
        "r_C": p.r_C,
        "r_E": p.r_E,
        "variant": p.variant,
        "alpha": _s(p.alpha),
        "beta": _s(p.beta),
        "fix_rounds": list(p.fix_rounds) if p.fix_rounds is not None else None,
        "seed": seed_text(p.seed),
        "constants": [[_s(c) for c in row] for row in p.constants],
    }


def ciminion_params_from_dict(d: dict) -> cim.CiminionParams:
    _need(d, ("q", "r_C", "r_E", "variant", "seed", "constants"), "ciminion-params")
    field = PrimeField(_i(d["q"], "q"))
    r = int(d["r_C"]) + int(d["r_E"])
    if not isinstance(d["constants"], list) or len(d["constants"]) != r:
        raise SchemaError("constants: expected one row per round")
    consts = tuple(_vec(row, 4, "constants") for row in d["constants"])
    fix = d.get("fix_rounds")
    return cim.CiminionParams(
        field, int(d["r_C"]), int(d["r_E"]), consts, d["variant"],
        alpha=_i(d.get("alpha", "1"), "alpha"), beta=_i(d.get("beta", "1"), "beta"),
        fix_rounds=tuple(int(i) for i in fix) if fix is not None else None,
        seed=str(d["seed"]).encode("latin-1"),
    )


def ciminion_sample_to_dict(s: cim.CiminionSample, key=None) -> dict:
    out = {"kind": "ciminion-sample", "version": __version__,
           "nonce": _s(s.nonce), "p1": _s(s.p1), "p2": _s(s.p2), "c1": _s(s.c1), "c2": _s(s.c2)}
    if key is not None:
        out["key"] = [_s(k) for k in key]
    return out


def ciminion_sample_from_dict(d: dict) -> tuple[cim.CiminionSample, tuple | None]:
    _need(d, ("nonce", "p1", "p2", "c1", "c2"), "ciminion-sample")
    s = cim.CiminionSample(*(_i(d[k], k) for k in ("nonce", "p1", "p2", "c1", "c2")))
    key = _vec(d["key"], 2, "key") if d.get("key") is not None else None
    return s, key


# -- Hydra --------------------------------------------------------------------

def hydra_params_to_dict(p: hyd.HydraParams) -> dict:
    mat = lambda M: [[_s(v) for v in row] for row in M]
    return {
        "kind": "hydra-params",
        "version": __version__,
        "q": _s(p.field.q),
        "r_H": p.r_H,
        "M_E": mat(p.M_E),
        "M_I": mat(p.M_I),
        "M_J": mat(p.M_J),
        "constants": mat(p.constants),
        "c_R": [_s(v) for v in p.c_R],
        "seed": seed_text(p.seed),
    }


def hydra_params_from_dict(d: dict) -> hyd.HydraParams:
    _need(d, ("q", "r_H", "M_E", "M_I", "M_J", "constants", "seed"), "hydra-params")
    field = PrimeField(_i(d["q"], "q"))
    q = field.q
    r_H = int(d["r_H"])
    if not isinstance(d["constants"], list) or len(d["constants"]) != r_H:
        raise SchemaError("constants: expected one row per round")
    red = lambda M: tuple(tuple(v % q for v in row) for row in M)
    return hyd.HydraParams(
        field, r_H,
        red(_mat(d["M_E"], 4, "M_E")), red(_mat(d["M_I"], 4, "M_I")), red(_mat(d["M_J"], 8, "M_J")),
        tuple(_vec(row, 8, "constants") for row in d["constants"]),
        _vec(d.get("c_R", ["0"] * 8), 8, "c_R"),
        str(d["seed"]).encode("latin-1"),
    )


def hydra_sample_to_dict(s: hyd.HydraSamplePair, with_witness: bool = True) -> dict:
    out = {"kind": "hydra-sample", "version": __version__,
           "c1": [_s(v) for v in s.c1], "c2": [_s(v) for v in s.c2]}
    if with_witness and s.witness_known():
        out.update(key=[_s(v) for v in s.key], y=[_s(v) for v in s.y], z=[_s(v) for v in s.z])
    return out


def hydra_sample_from_dict(d: dict) -> hyd.HydraSamplePair:
    _need(d, ("c1", "c2"), "hydra-sample")
    opt = lambda k: _vec(d[k], 4, k) if d.get(k) is not None else None
    return hyd.HydraSamplePair(_vec(d["c1"], 8, "c1"), _vec(d["c2"], 8, "c2"), opt("key"), opt("y"), opt("z"))


def load_params(path):
    d = load_json(path)
    kind = d.get("kind") if isinstance(d, dict) else None
    if kind == "ciminion-params":
        return ciminion_params_from_dict(d)
    if kind == "hydra-params":
        return hydra_params_from_dict(d)
    raise SchemaError(f"{path}: unknown parameter kind {kind!r}")
