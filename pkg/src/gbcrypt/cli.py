"""Command-line front end.

Every command writes JSON lines; each record carries q, rounds, variant, seed
and the package version.  Wall-clock timings are only emitted with
``--timings`` so that identical invocations produce identical bytes.

Exit codes: 0 success, 1 no solution (or a failed check), 2 usage or parse
error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from typing import Iterator

from . import __version__
from . import ciminion as cim
from . import estimator as est
from . import hydra as hyd
from . import io
from .algebra.field import PrimeField
from .budget import Budget
from .constants import DEFAULT_SEED, field_stream
from .errors import BudgetExceeded, GBCryptError, InvalidParams, NoSolution, NotFoundWithin
from .macaulay import dreg_small, solving_degree_search
from .mpoly.groebner import is_groebner, quotient_basis
from .mpoly.poly import TermOrder
from .solver import SolveOptions, recover_ciminion_key, recover_hydra_key

EXIT_OK, EXIT_NO_SOLUTION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_rounds(text: str) -> list[int]:
    """'8', '2..8' or '3,5,7'."""
    out = []
    try:
        for part in text.split(","):
            if ".." in part:
                a, b = part.split("..")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad round spec {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty round spec")
    return out


def _omega(text: str) -> float:
    v = float(text)
    if not est.OMEGA_MIN <= v <= est.OMEGA_MAX:
        raise argparse.ArgumentTypeError(f"omega must lie in [{est.OMEGA_MIN}, {est.OMEGA_MAX}]")
    return v


def _seed_bytes(args) -> bytes:
    if getattr(args, "record_seed", None) is not None:
        return args.record_seed
    return args.seed.encode() if args.seed is not None else DEFAULT_SEED


def _record(args, q, rounds, variant, seed: bytes | None = None, **fields) -> dict:
    rec = {"q": str(q), "rounds": rounds, "variant": variant,
           "seed": io.seed_text(seed if seed is not None else _seed_bytes(args)), "version": __version__}
    rec.update(fields)
    return rec


class Emitter:
    def __init__(self, path: str | None):
        self.path = path
        self.lines: list[str] = []

    def __call__(self, rec: dict) -> None:
        self.lines.append(json.dumps(rec, sort_keys=True))

    def text(self, s: str) -> None:
        self.lines.append(s)

    def flush(self) -> None:
        data = "".join(line + "\n" for line in self.lines)
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)
            sys.stdout.flush()


# -- instance helpers ---------------------------------------------------------

def split_rounds(r: int, r_C: int | None = None) -> tuple[int, int]:
    if r_C is None:
        r_C = (r + 1) // 2
    if not 1 <= r_C < r:
        raise InvalidParams("need 1 <= r_C < rounds")
    return r_C, r - r_C


def ciminion_instance(q: int, r: int, variant: str, seed: bytes, r_C: int | None = None):
    field = PrimeField(q)
    rc, re_ = split_rounds(r, r_C)
    params = cim.CiminionParams.generate(field, rc, re_, seed, variant)
    s = field_stream(seed, b"sample", q)
    keys = (next(s), next(s))
    nonce = next(s)
    pt = (next(s), next(s))
    return params, cim.make_sample(params, keys, nonce, pt), keys


def hydra_sample_for(params: hyd.HydraParams, seed: bytes) -> hyd.HydraSamplePair:
    s = field_stream(seed, b"sample", params.field.q)
    k = [next(s) for _ in range(4)]
    y = [next(s) for _ in range(4)]
    z = [next(s) for _ in range(4)]
    return hyd.make_sample(params, k, y, z)


def hydra_instance(q: int, r_H: int, seed: bytes):
    params = hyd.HydraParams.generate(PrimeField(q), r_H, seed)
    return params, hydra_sample_for(params, seed)


def _budget(args) -> Budget | None:
    return Budget(ms=args.budget_ms) if getattr(args, "budget_ms", None) else None


# -- commands -----------------------------------------------------------------

def cmd_estimate(args, emit: Emitter) -> int:
    cfg = est.EstimatorConfig(q=args.q or est.DEFAULT_Q, omega=args.omega, N=args.N)
    if args.table:
        emit.text(est.render_table(args.table, args.rounds, cfg))
        return EXIT_OK
    if not args.rounds:
        raise UsageError("estimate needs --rounds or --table")
    for r in args.rounds:
        rep = est.est_ciminion(r, cfg) if args.cipher == "ciminion" else est.est_hydra(r, cfg)
        variant = args.variant if args.cipher == "ciminion" else None
        d = rep.as_dict()
        for k in ("q", "rounds", "omega"):
            d.pop(k)
        emit(_record(args, cfg.q, r, variant, record="estimate", omega=args.omega, **d))
    return EXIT_OK


def cmd_params(args, emit: Emitter) -> int:
    if len(args.rounds) != 1:
        raise UsageError("params takes a single round number")
    r = args.rounds[0]
    seed = _seed_bytes(args)
    q = args.q or 7741
    if args.cipher == "ciminion":
        rc, re_ = split_rounds(r, args.r_c)
        params = cim.CiminionParams.generate(PrimeField(q), rc, re_, seed, args.variant)
        d = io.ciminion_params_to_dict(params)
    else:
        d = io.hydra_params_to_dict(hyd.HydraParams.generate(PrimeField(q), r, seed))
    emit.text(json.dumps(d, sort_keys=True))
    return EXIT_OK


def cmd_sample(args, emit: Emitter) -> int:
    params = io.load_params(args.params)
    seed = _seed_bytes(args)
    if isinstance(params, cim.CiminionParams):
        s = field_stream(seed, b"sample", params.field.q)
        keys = (next(s), next(s))
        nonce = next(s)
        pt = (next(s), next(s))
        d = io.ciminion_sample_to_dict(cim.make_sample(params, keys, nonce, pt), keys)
    else:
        d = io.hydra_sample_to_dict(hydra_sample_for(params, seed))
    emit.text(json.dumps(d, sort_keys=True))
    return EXIT_OK


def cmd_attack(args, emit: Emitter) -> int:
    params = io.load_params(args.params)
    sample_d = io.load_json(args.sample)
    opts = SolveOptions(N=args.N, budget=_budget(args), seed=0)
    q = params.field.q
    if args.seed is None:
        args.record_seed = params.seed
    if isinstance(params, cim.CiminionParams):
        sample, key = io.ciminion_sample_from_dict(sample_d)
        rounds, variant = params.rounds, params.variant
        fixture = tuple(key) if key is not None else None
        try:
            rep = recover_ciminion_key(params, sample, opts, args.strategy)
        except NoSolution:
            emit(_record(args, q, rounds, variant, record="attack", cipher="ciminion", verified=False,
                         candidates=[]))
            return EXIT_NO_SOLUTION
        found = fixture in rep.candidates if fixture is not None else None
    else:
        sample = io.hydra_sample_from_dict(sample_d)
        rounds, variant = params.r_H, None
        fixture = tuple(sample.key) if sample.key is not None else None
        try:
            rep = recover_hydra_key(params, sample, opts)
        except NoSolution:
            emit(_record(args, q, rounds, variant, record="attack", cipher="hydra", verified=False,
                         candidates=[]))
            return EXIT_NO_SOLUTION
        found = any(c[0] == fixture for c in rep.candidates) if fixture is not None else None
    d = rep.as_dict()
    if not args.timings:
        d.pop("timings_s")
    emit(_record(args, q, rounds, variant, record="attack", fixture_key_found=found, **d))
    return EXIT_OK


def _exp_gb_verify(args, emit: Emitter, q: int, r: int, seed: bytes) -> bool:
    if args.hydra:
        params, sample = hydra_instance(q, r, seed)
        red = hyd.reduce_model(hyd.build_model(params, sample))
        order = TermOrder.drl(red.gb.ring.n)
        ok = is_groebner(red.gb, order, skip_coprime=False, budget=_budget(args))
        lms_ok = all(g.lm(order) == tuple(2 if j == i else 0 for j in range(red.gb.ring.n))
                     for i, g in enumerate(red.gb))
        dim = len(quotient_basis(red.gb, order)) if ok else None
        rec = dict(groebner=ok, squares=lms_ok, gb_size=len(red.gb), extras=len(red.extras),
                   quotient_dim=dim, witness=all(f.evaluate(red.hat_witness()) == 0 for f in red.combined()))
        passed = ok and lms_ok and len(red.extras) == 4 and dim is not None and dim <= 2 ** (2 * r - 2)
        emit(_record(args, q, r, None, record="gb-verify", cipher="hydra", passed=passed, **rec))
        return passed
    params, sample, _ = ciminion_instance(q, r, args.variant, seed)
    model = cim.build_model(params, sample)
    gb = cim.ciminion_gb(model)
    ok = is_groebner(gb, model.order, budget=_budget(args))
    dim = len(quotient_basis(gb, model.order)) if ok else None
    passed = ok and dim == 2 ** (r - 1)
    emit(_record(args, q, r, args.variant, record="gb-verify", cipher="ciminion", passed=passed,
                 groebner=ok, quotient_dim=dim, gb_size=len(gb)))
    return passed


def _exp_solve_degree(args, emit: Emitter, q: int, r: int, seed: bytes) -> bool:
    if not args.hydra:
        raise UsageError("solve-degree runs on --hydra instances")
    params, sample = hydra_instance(q, r, seed)
    red = hyd.reduce_model(hyd.build_model(params, sample))
    order = TermOrder.drl(red.gb.ring.n)
    budget = _budget(args)
    d_max = args.d_max or 2 * r
    if args.boolean:
        res = solving_degree_search(list(red.extras), order, d_max, F_bool=red.gb, budget=budget,
                                    closure=args.closure)
    else:
        res = solving_degree_search(red.combined(), order, d_max, budget=budget, closure=args.closure)
    for rec in res.records:
        d = rec.as_dict()
        if not args.timings:
            d.pop("elapsed_s")
        emit(_record(args, q, r, None, record="solve-degree-step", boolean=args.boolean,
                     closure=args.closure, **d))
    dreg = dreg_small(red.combined(), budget)
    emit(_record(args, q, r, None, record="solve-degree", boolean=args.boolean, closure=args.closure,
                 degree=res.degree,
                 dreg=dreg if dreg != float("inf") else None, semi_regular_dreg=est.hilbert_dreg(r),
                 gb_size=len(res.gb)))
    return True


def _exp_rank_check(args, emit: Emitter, q: int, r: int, seed: bytes) -> bool:
    params, sample = hydra_instance(q, r, seed)
    G = hyd.transform(hyd.build_model(params, sample))
    rank, full = hyd.generic_coordinates_check(G, params)
    _, elim = hyd.eliminate_affine(G)
    affine = len(elim.pivots)
    passed = full and rank == 16 * r + 4 and affine == 14 * r + 6
    emit(_record(args, q, r, None, record="rank-check", cipher="hydra", generic_rank=rank,
                 full_rank=full, affine_rank=affine, expected=[16 * r + 4, 14 * r + 6], passed=passed))
    return passed


EXPERIMENTS = {"gb-verify": _exp_gb_verify, "solve-degree": _exp_solve_degree, "rank-check": _exp_rank_check}


def cmd_experiment(args, emit: Emitter) -> int:
    if args.name == "rank-check":
        args.hydra = True
    q = args.q or 7741
    seed = _seed_bytes(args)
    ok = True
    for r in args.rounds:
        ok &= EXPERIMENTS[args.name](args, emit, q, r, seed)
    return EXIT_OK if ok else EXIT_NO_SOLUTION


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gbcrypt", description="Groebner basis attacks on Ciminion and Hydra")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", default=None, help="run seed (default: package default)")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--budget-ms", type=float, default=None, dest="budget_ms")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings")
    common.add_argument("--variant", choices=cim.VARIANTS, default=cim.STANDARD)
    common.add_argument("--q", type=int, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", parents=[common], help="bit-complexity estimates")
    e.add_argument("--cipher", choices=("ciminion", "hydra"), default="ciminion")
    e.add_argument("--rounds", type=parse_rounds)
    e.add_argument("--omega", type=_omega, default=2)
    e.add_argument("--N", type=int, default=1)
    e.add_argument("--table", choices=("ciminion", "hydra"))

    pa = sub.add_parser("params", parents=[common], help="write a parameter file")
    pa.add_argument("--cipher", choices=("ciminion", "hydra"), required=True)
    pa.add_argument("--rounds", type=parse_rounds, required=True)
    pa.add_argument("--r-c", type=int, default=None, dest="r_c")

    s = sub.add_parser("sample", parents=[common], help="write a sample file with its generating key")
    s.add_argument("--params", required=True)

    a = sub.add_parser("attack", parents=[common], help="recover a key from a sample")
    a.add_argument("--params", required=True)
    a.add_argument("--sample", required=True)
    a.add_argument("--strategy", choices=("auto", "bariant", "eigen"), default="auto")
    a.add_argument("--N", type=int, default=None)

    x = sub.add_parser("experiment", parents=[common], help="desk-scale experiments")
    x.add_argument("name", choices=sorted(EXPERIMENTS))
    which = x.add_mutually_exclusive_group()
    which.add_argument("--ciminion", action="store_true")
    which.add_argument("--hydra", action="store_true")
    x.add_argument("--rounds", type=parse_rounds, required=True)
    x.add_argument("--boolean", action="store_true")
    x.add_argument("--closure", action="store_true",
                   help="re-multiply lower-degree row-space members at each degree (F4-style working degree)")
    x.add_argument("--d-max", type=int, default=None, dest="d_max")
    return p


COMMANDS = {"estimate": cmd_estimate, "params": cmd_params, "sample": cmd_sample,
            "attack": cmd_attack, "experiment": cmd_experiment}


@contextmanager
def _errors(parser: argparse.ArgumentParser) -> Iterator[list]:
    code = [EXIT_OK]
    try:
        yield code
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"gbcrypt: error: {e}", file=sys.stderr)
        code[0] = EXIT_USAGE
    except BudgetExceeded as e:
        print(f"gbcrypt: budget exhausted: {e}", file=sys.stderr)
        code[0] = EXIT_BUDGET
    except NoSolution as e:
        print(f"gbcrypt: no solution: {e}", file=sys.stderr)
        code[0] = EXIT_NO_SOLUTION
    except NotFoundWithin as e:
        print(f"gbcrypt: {e}", file=sys.stderr)
        code[0] = EXIT_NO_SOLUTION
    except (io.SchemaError, InvalidParams, ValueError, OSError) as e:
        print(f"gbcrypt: error: {e}", file=sys.stderr)
        code[0] = EXIT_USAGE
    except GBCryptError as e:
        print(f"gbcrypt: {type(e).__name__}: {e}", file=sys.stderr)
        code[0] = EXIT_NO_SOLUTION


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    emit = Emitter(args.out)
    with _errors(parser) as code:
        code[0] = COMMANDS[args.command](args, emit)
        emit.flush()
    return code[0]


if __name__ == "__main__":
    sys.exit(main())
