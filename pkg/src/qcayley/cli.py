"""Command-line interface: ``qcayley <command> ...``.

Every command prints a JSON document with sorted keys.  Library errors are
reported as ``{"error": <name>, "detail": <message>}`` with exit status 1;
malformed input files and bad arguments exit with status 2.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from . import io
from .cayley import LambdaParam, cayley, cayley_invariance, basis_compatible, gen_remark, inverse_cayley, left_mult_gap
from .config import TOL_ENV_VAR, default_tol
from .errors import InvalidLambda, InvalidOperator, QuaternionicError
from .hspace import HilbertBasis
from .qop import PartialOperator, classify, operator_deviation
from .quat import Quaternion
from .spectral import defect_number, s_spectrum
from .verify import run_all, SUITES

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tol: float = 1e-9
    lam: LambdaParam = LambdaParam()
    trials: int = 20
    input: str | None = None
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")


class UsageError(Exception):
    """Bad input detected after argument parsing; exits with status 2."""


def _quaternion(text: str) -> Quaternion:
    try:
        q = Quaternion.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not all(math.isfinite(v) for v in q.to_json()):
        raise argparse.ArgumentTypeError(f"non-finite component in {text!r}")
    return q


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _emit(obj: Any, out: str | None = None) -> None:
    if out:
        io.write_json(out, obj)
    else:
        print(io.dumps(obj))


def _load_operator(path: str):
    return io.load_operator(io.read_json(path))


def _load_basis(path: str | None, n: int) -> HilbertBasis:
    if path is None:
        return HilbertBasis.standard(n)
    b = io.load_basis(io.read_json(path))
    if b.n != n:
        raise InvalidOperator(f"basis has dimension {b.n}, operator acts on H^{n}")
    return b


def _dim(op) -> int:
    return op.n if isinstance(op, PartialOperator) else op.shape[0]


# --- commands ------------------------------------------------------------------


def cmd_gen(args, cfg: RunConfig) -> int:
    if not args.thetas and not args.signs:
        raise UsageError("gen needs at least one block (--thetas and/or --signs)")
    try:
        m = gen_remark(args.thetas, args.signs, args.perm)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    flags = classify(m, tol=cfg.tol).to_json()
    if cfg.out:
        io.write_json(cfg.out, io.dump_operator(m))
        print(io.dumps({"flags": flags, "n": m.shape[0], "out": cfg.out}))
    else:
        print(io.dumps({"flags": flags, "operator": io.dump_operator(m)}))
    return EXIT_OK


def cmd_cayley(args, cfg: RunConfig) -> int:
    a = _load_operator(args.operator)
    b = _load_basis(args.basis, _dim(a))
    pair = cayley(a, cfg.lam, b, tol=cfg.tol)
    _emit(io.dump_cayley_pair(pair), cfg.out)
    return EXIT_OK


def cmd_inv_cayley(args, cfg: RunConfig) -> int:
    obj = io.read_json(args.operator)
    source = None
    if isinstance(obj, dict) and "transform" in obj:
        pair = io.load_cayley_pair(obj, relaxed=cfg.lam.relaxed)
        u, lam, b, source = pair.transform, pair.lam, pair.basis, pair.source
    else:
        u = io.load_operator(obj)
        lam = cfg.lam
        b = _load_basis(args.basis, _dim(u))
    a_u = inverse_cayley(u, lam, b, tol=cfg.tol)
    result = {"operator": io.dump_operator(a_u), "lambda": lam.value.to_json(), "basis_id": io.basis_id(b)}
    if source is not None:
        result["round_trip"] = operator_deviation(source, a_u)
    _emit(result, cfg.out)
    return EXIT_OK


def cmd_sspectrum(args, cfg: RunConfig) -> int:
    a = _load_operator(args.operator)
    if isinstance(a, PartialOperator):
        raise InvalidOperator("the S-spectrum is computed for operators defined on all of H^n")
    spheres = s_spectrum(a, args.merge_tol)
    _emit({"spheres": [s.to_json() for s in spheres], "tol": args.merge_tol}, cfg.out)
    return EXIT_OK


def cmd_defect(args, cfg: RunConfig) -> int:
    a = _load_operator(args.operator)
    b = _load_basis(args.basis, _dim(a))
    _emit(defect_number(a, args.q, b, cfg.tol).to_json(), cfg.out)
    return EXIT_OK


def cmd_basis_check(args, cfg: RunConfig) -> int:
    b1 = io.load_basis(io.read_json(args.basis1))
    b2 = io.load_basis(io.read_json(args.basis2))
    if b1.n != b2.n:
        raise InvalidOperator(f"bases of H^{b1.n} and H^{b2.n}")
    result = {
        "compatible": basis_compatible(b1, b2, cfg.tol),
        "left_mult_gap": left_mult_gap(b1, b2),
        "basis_ids": [io.basis_id(b1), io.basis_id(b2)],
    }
    if args.operator:
        a = _load_operator(args.operator)
        result["cayley_deviation"] = cayley_invariance(a, cfg.lam, b1, b2, cfg.tol).deviation
    _emit(result, cfg.out)
    return EXIT_OK


def _load_corpus(path: str) -> tuple[list, list]:
    """Operators from ``--input``: one operator, a list, or {"operators", "basis"?}."""
    obj = io.read_json(path)
    basis_obj = None
    if isinstance(obj, dict) and "operators" in obj:
        basis_obj = obj.get("basis")
        obj = obj["operators"]
    items = obj if isinstance(obj, list) else [obj]
    if not items:
        raise InvalidOperator(f"{path}: no operators")
    ops = [io.load_operator(it) for it in items]
    basis = io.load_basis(basis_obj) if basis_obj is not None else None
    extra, summary = [], []
    for k, op in enumerate(ops):
        b = basis or HilbertBasis.standard(_dim(op))
        if b.n != _dim(op):
            raise InvalidOperator(f"operator {k}: dimension {_dim(op)} does not match basis {b.n}")
        flags = classify(op, b)
        summary.append({"index": k, "flags": flags.to_json(), "used": flags.in_Y})
        if flags.in_Y:
            extra.append((op, b))
    return extra, summary


def cmd_verify(args, cfg: RunConfig) -> int:
    extra, summary = ([], None) if cfg.input is None else _load_corpus(cfg.input)
    for name in args.suite or ():
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}")
    report = run_all(cfg.seed, cfg.trials, cfg.lam, extra, jobs=args.jobs, only=args.suite)
    if summary is not None:
        report["input"] = summary
    _emit(report, cfg.out)
    if cfg.out:
        print(io.dumps({"all_passed": report["all_passed"], "out": cfg.out}))
    return EXIT_OK if report["all_passed"] else EXIT_FAIL


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=None,
                        help=f"rank/regularity tolerance (default: ${TOL_ENV_VAR} or 1e-9)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_positive_int, default=20)
    common.add_argument("--lambda", dest="lam", type=_quaternion, default=Quaternion(0.0, 1.0, 1.0, 1.0),
                        metavar="W,X,Y,Z", help="Cayley parameter (default: 0,1,1,1)")
    common.add_argument("--relax-lambda", action="store_true",
                        help="accept any non-real lambda (experimental, drops the positivity convention)")
    common.add_argument("--out", default=None, help="write the JSON result here instead of stdout")

    p = argparse.ArgumentParser(prog="qcayley", description="Quaternionic Cayley transform toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a block matrix of A_theta and +-1 blocks")
    g.add_argument("--thetas", type=_float_list, default=[])
    g.add_argument("--signs", type=_int_list, default=[])
    g.add_argument("--perm", type=_int_list, default=None, help="permutation of block indices")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cayley", parents=[common], help="Cayley transform of a class-Y operator")
    c.add_argument("operator")
    c.add_argument("--basis", default=None, help="JSON basis inducing left multiplication")
    c.set_defaults(func=cmd_cayley)

    ic = sub.add_parser("inv-cayley", parents=[common], help="inverse Cayley transform")
    ic.add_argument("operator", help="operator JSON or the output of 'cayley'")
    ic.add_argument("--basis", default=None)
    ic.set_defaults(func=cmd_inv_cayley)

    s = sub.add_parser("sspectrum", parents=[common], help="S-spectrum as (re, im_norm) spheres")
    s.add_argument("operator")
    s.add_argument("--merge-tol", type=_positive_float, default=1e-8)
    s.set_defaults(func=cmd_sspectrum)

    d = sub.add_parser("defect", parents=[common], help="defect number d_q and regularity at q")
    d.add_argument("operator")
    d.add_argument("--q", type=_quaternion, required=True, metavar="W,X,Y,Z")
    d.add_argument("--basis", default=None)
    d.set_defaults(func=cmd_defect)

    v = sub.add_parser("verify", parents=[common], help="run the randomized proposition suites")
    v.add_argument("--input", default=None, help="extra operators to include in the class-Y corpus")
    v.add_argument("--jobs", type=_positive_int, default=1)
    v.add_argument("--suite", action="append", default=None, help="run only this suite (repeatable)")
    v.set_defaults(func=cmd_verify)

    bc = sub.add_parser("basis-check", parents=[common], help="compare the left products of two bases")
    bc.add_argument("basis1")
    bc.add_argument("basis2")
    bc.add_argument("--operator", default=None, help="also compare Cayley transforms of this operator")
    bc.set_defaults(func=cmd_basis_check)
    return p


def _error(exc: BaseException) -> None:
    print(io.dumps({"error": type(exc).__name__, "detail": str(exc)}))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else default_tol()
        cfg = RunConfig(
            seed=args.seed,
            tol=tol,
            lam=LambdaParam(args.lam, relaxed=args.relax_lambda),
            trials=args.trials,
            input=getattr(args, "input", None),
            out=args.out,
        )
        return args.func(args, cfg)
    except (UsageError, InvalidOperator, InvalidLambda, OSError) as exc:
        _error(exc)
        return EXIT_USAGE
    except QuaternionicError as exc:
        _error(exc)
        return EXIT_FAIL
    except ValueError as exc:
        # RunConfig / environment validation
        _error(exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
