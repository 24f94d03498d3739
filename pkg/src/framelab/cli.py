"""
Command line front end.

    framelab bounds --frame mb.json
    framelab cassa --r 2 --generators 3 --out c.json
    framelab riesz --frame c.json
    framelab dual --frame f3.json --sampling id2.json --weight w.json

Exit status is 0 on success and 2 on any validation or input error, with
a one-line diagnostic on stderr. Reports go to ``--out`` or stdout.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import io
from .duals import ObliqueDualProblem, oblique_dual, weight_sup_probe, weighted_dual
from .errors import FrameLabError
from .frames import canonical_dual, frame_bounds, frame_operator, is_tight
from .riesz import (
    CassaSpec,
    cassa_frame,
    conditional_riesz_check,
    nullspace_density,
    riesz_certificate,
)
from .subspace import Tolerance, angle, column_space, numerical_rank, orthogonal_complement

RTOL_ENV = "FRAMELAB_RTOL"
DEFAULT_MAX_SUBSETS = 2**18 - 1


def _tolerance(args) -> Tolerance:
    rtol = args.rtol
    if rtol is None and os.environ.get(RTOL_ENV):
        try:
            rtol = float(os.environ[RTOL_ENV])
        except ValueError:
            raise FrameLabError(f"{RTOL_ENV} is not a number: {os.environ[RTOL_ENV]!r}") from None
    return Tolerance(rank_rtol=rtol)


def _input(path):
    return {"path": str(path), "sha256": io.file_digest(path)}


def _bounds_dict(b):
    return {"lower": b.lower, "upper": b.upper}


def _sampling(args, d):
    if args.sampling is None:
        return np.eye(d), None
    return io.load_matrix(args.sampling), _input(args.sampling)


def cmd_bounds(args, tol):
    f = io.load_frame(args.frame)
    b = frame_bounds(f, tol)
    results = {
        "ambient_dim": f.ambient_dim,
        "count": f.count,
        "rank": numerical_rank(f.synthesis, tol),
        "lower": b.lower,
        "upper": b.upper,
        "tight": is_tight(f, tol),
        "frame_operator": frame_operator(f),
        "canonical_dual": canonical_dual(f, tol).vectors,
    }
    return {"frame": _input(args.frame)}, results


def cmd_dual(args, tol):
    f = io.load_frame(args.frame)
    b, b_in = _sampling(args, f.ambient_dim)
    weight = io.load_weight(args.weight, f.count)
    p = ObliqueDualProblem(f, b, weight, tol)
    identity = str(args.weight) == "I"
    dual = oblique_dual(p) if identity else weighted_dual(p)
    inputs = {"frame": _input(args.frame), "sampling": b_in, "weight": "I" if identity else _input(args.weight)}
    results = {
        "provenance": dual.provenance,
        "weight": weight.values,
        "weight_condition": weight.condition,
        "direct_sum_cosine": p.direct_sum_cosine,
        "dual_vectors": dual.vectors,
    }
    return inputs, results


def cmd_angle(args, tol):
    f = io.load_frame(args.frame)
    b, b_in = _sampling(args, f.ambient_dim)
    if b.shape[0] != f.ambient_dim:
        raise FrameLabError(f"dimension mismatch: sampling lives in R^{b.shape[0]}, frame in R^{f.ambient_dim}")
    w = column_space(f.synthesis, tol)
    m = column_space(b, tol)
    a = angle(w, m, tol)
    a_perp = angle(w, orthogonal_complement(m, tol), tol)
    results = {
        "dim_W": w.dim,
        "dim_M": m.dim,
        "W_M": {"cosine": a.cosine, "sine": a.sine, "intersection_dim": a.intersection_dim},
        "W_Mperp": {"cosine": a_perp.cosine, "sine": a_perp.sine, "intersection_dim": a_perp.intersection_dim},
    }
    return {"frame": _input(args.frame), "sampling": b_in}, results


def cmd_riesz(args, tol):
    f = io.load_frame(args.frame)
    budget = args.max_subsets
    if budget < 1:
        raise FrameLabError(f"--max-subsets must be >= 1, got {budget}")
    cert = riesz_certificate(f, tol, max_exhaustive=int(math.log2(budget + 1)), samples=budget, seed=args.seed)
    results = {
        "sup_cosine": cert.sup_cosine,
        "worst_subset": list(cert.worst_subset),
        "uniform_lower": cert.uniform_lower,
        "uniform_upper": cert.uniform_upper,
        "exhaustive": cert.exhaustive,
        "subsets_checked": cert.subsets_checked,
        "sandwich_ok": cert.sandwich_ok,
    }
    return {"frame": _input(args.frame)}, results


def _chain(args):
    if args.chain is None:
        return None, None
    return io.load_chain(args.chain), _input(args.chain)


def cmd_chain(args, tol):
    f = io.load_frame(args.frame)
    chain, c_in = _chain(args)
    rep = conditional_riesz_check(f, chain, tol)
    results = {
        "sup_cosine": rep.sup_cosine,
        "cosines": rep.cosines,
        "bounds": [_bounds_dict(b) for b in rep.bounds],
        "guaranteed_lower": rep.guaranteed_lower,
    }
    return {"frame": _input(args.frame), "chain": c_in}, results


def cmd_density(args, tol):
    f = io.load_frame(args.frame)
    chain, c_in = _chain(args)
    rep = nullspace_density(f, chain, tol)
    results = {
        "nullspace_dim": rep.nullspace_dim,
        "gaps": rep.gaps,
        "captured_dims": rep.captured_dims,
        "density_step": rep.density_step,
        "ap_errors": rep.ap_errors,
        "ap_predicted": rep.ap_predicted,
    }
    return {"frame": _input(args.frame), "chain": c_in}, results


def cmd_cassa(args, tol):
    spec = CassaSpec(args.r, args.generators)
    cf = cassa_frame(spec, tol)
    results = {
        "r": spec.r,
        "generators": spec.generators,
        "ambient": spec.ambient,
        "generator_vectors": cf.generators.T,
        "nullspace_basis": cf.nullspace.basis.T,
        "frame": io.matrix_to_json(cf.frame.synthesis),
    }
    return {}, results


def cmd_probe(args, tol):
    f = io.load_frame(args.frame)
    b, b_in = _sampling(args, f.ambient_dim)
    probe = weight_sup_probe(f, b, samples=args.samples, seed=args.seed, weight_range=tuple(args.weight_range), tol=tol)
    results = {
        "samples": args.samples,
        "weight_range": list(args.weight_range),
        "max_dual_norm": probe.max_dual_norm,
        "max_projection_norm": probe.max_projection_norm,
        "sandwich_ok": probe.sandwich_ok,
        "table": probe.table,
    }
    return {"frame": _input(args.frame), "sampling": b_in}, results


COMMANDS = {
    "bounds": cmd_bounds,
    "dual": cmd_dual,
    "angle": cmd_angle,
    "riesz": cmd_riesz,
    "chain": cmd_chain,
    "density": cmd_density,
    "cassa": cmd_cassa,
    "probe-weights": cmd_probe,
}

SEEDED = {"riesz", "probe-weights"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rtol", type=float, default=None, help=f"relative rank cutoff (default: ${RTOL_ENV} or per-matrix)")
    common.add_argument("--out", default=None, help="report path (default: stdout)")

    parser = argparse.ArgumentParser(prog="framelab", description="Frame bounds, angles, Riesz certificates and dual frames.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, frame=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if frame:
            p.add_argument("--frame", required=True, help="frame file (JSON or CSV)")
        return p

    add("bounds", "frame bounds, frame operator and canonical dual")
    p = add("dual", "oblique / weighted dual frame")
    p.add_argument("--sampling", default=None, help="sampling synthesis matrix (default: identity)")
    p.add_argument("--weight", default="I", help='weight file or "I"')
    p = add("angle", "angles between W = R(T), M = R(B) and M^perp")
    p.add_argument("--sampling", default=None)
    p = add("riesz", "Riesz certificate over index subsets")
    p.add_argument("--max-subsets", type=int, default=DEFAULT_MAX_SUBSETS,
                   help="enumerate all subsets up to this many, else sample this many")
    p.add_argument("--seed", type=int, default=0)
    p = add("chain", "conditional Riesz check along a nested chain")
    p.add_argument("--chain", default=None, help="chain file (default: prefixes)")
    p = add("density", "nullspace density along a nested chain")
    p.add_argument("--chain", default=None)
    p = add("cassa", "build a Cassa frame; the report is itself a frame file", frame=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--generators", type=int, required=True)
    p = add("probe-weights", "sample weights and bound the weighted duals")
    p.add_argument("--sampling", default=None)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weight-range", type=float, nargs=2, default=[1e-3, 1e3], metavar=("LO", "HI"))
    return parser


def run(argv=None) -> dict:
    """Parse ``argv`` and return the report dict. Raises on invalid input."""
    args = build_parser().parse_args(argv)
    tol = _tolerance(args)
    inputs, results = COMMANDS[args.command](args, tol)
    report = {
        "command": args.command,
        "inputs": inputs,
        "tolerance": {"rank_rtol": tol.rank_rtol, "angle_atol": tol.angle_atol},
        "seed": args.seed if args.command in SEEDED else None,
        "results": results,
    }
    if args.command == "cassa":
        # loadable as a frame file
        report.update(results["frame"])
    text = io.dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report


def main(argv=None) -> int:
    try:
        run(argv)
    except FrameLabError as exc:
        print(f"framelab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"framelab: error: {exc.strerror or exc}: {exc.filename}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
