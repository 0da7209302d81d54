"""Command-line front end: ``homricci {check,ricci,bochner,flow}``.

Exit codes: 0 success, 2 invalid input, 3 claim violated, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import catalog
from .algebra import IDEAL_TOL, JACOBI_TOL, LieAlgebraError, Subspace, is_compact_semisimple, jacobi_residual
from .bochner import (
    BochnerViolation,
    HypothesisError,
    build_bochner,
    mixed_term_audit,
    positive_direction,
    reduce_to_semisimple,
)
from .curvature import ricci_oracle, ricci_tensor
from .flow import FlowOptions, integrate
from .presentation import (
    SKEW_TOL,
    Metric,
    MetricError,
    Presentation,
    PresentationError,
    check_presentation,
    equivariance_defect,
)
from . import serialize

EXIT_OK, EXIT_INPUT, EXIT_CLAIM, EXIT_NUMERIC = 0, 2, 3, 4
ORACLE_TOL = 1e-9


class InputError(Exception):
    pass


def _load_space(args, validate=True):
    """Returns (presentation, ideal, candidates, doc)."""
    if args.builtin:
        try:
            entry = catalog.get(args.builtin)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        p = entry.presentation
        ideal = entry.compact_ideal
        cands = [ideal] if ideal is not None else []
        cands.append(Subspace.whole(p.algebra.dim))
        return p, ideal, cands, serialize.entry_to_document(entry)
    path = Path(args.space_file)
    try:
        doc = serialize.load_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if "algebra" not in doc and "dim" in doc:
        doc = {"algebra": doc}
    if validate:
        p = serialize.presentation_from_document(doc, base=path.parent)
    else:
        p = serialize.presentation_from_document(doc, base=path.parent, validate=False)
    n = p.algebra.dim
    ideal = serialize.ideal_from_document(doc, n)
    cands = serialize.ideal_candidates_from_document(doc, n)
    if ideal is not None:
        cands.insert(0, ideal)
    return p, ideal, cands, doc


def _metric(args, p: Presentation, seed=None) -> Metric:
    src = args.metric
    if src == "identity":
        return Metric.identity(p)
    if src == "random":
        return catalog.random_metric(p, args.seed if seed is None else seed)
    try:
        g = serialize.metric_from_document(serialize.load_json(src))
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read metric {src}: {exc}") from None
    if g.operator.shape != (p.dim_m, p.dim_m):
        raise InputError(f"metric must be {p.dim_m} x {p.dim_m}")
    return g


def _seeds(args):
    if args.sweep:
        return [args.seed + i for i in range(args.sweep)]
    return [None]


def _emit(doc, args):
    text = serialize.dumps(doc)
    print(text)
    if getattr(args, "out", None):
        Path(args.out).with_suffix(".json").write_text(text + "\n")


def cmd_check(args) -> int:
    p, ideal, _, _ = _load_space(args, validate=False)
    a = p.algebra
    jac = jacobi_residual(a)
    rep = check_presentation(p)
    jac_ok = jac <= JACOBI_TOL * (1.0 + np.abs(a.structure).max()) ** 2
    doc = {
        "jacobi_residual": jac,
        "subalgebra_residual": rep.subalgebra_residual,
        "reductivity_residual": rep.reductivity_residual,
        "skew_defect": rep.skew_defect,
        "effectiveness_kernel_dim": rep.kernel.dim,
        "effectiveness_kernel": rep.kernel.basis.tolist(),
        "dim_g": a.dim,
        "dim_h": p.dim_h,
        "dim_m": p.dim_m,
    }
    ok = bool(jac_ok and rep.ok)
    if ideal is not None:
        cert = is_compact_semisimple(a, ideal)
        doc["ideal"] = {
            "compact_semisimple": bool(cert),
            "killing_eigenvalues": cert.eigenvalues.tolist(),
        }
        ok = ok and bool(cert)
    doc["ok"] = ok
    _emit(doc, args)
    return EXIT_OK if ok else EXIT_CLAIM


def _ricci_doc(p, g, r):
    return {
        "metric": g.operator.tolist(),
        "tensor": r.tensor.tolist(),
        "operator_eigenvalues": r.eigenvalues.tolist(),
        "scalar": r.scalar,
        "mean_curvature": r.mean_curvature.tolist(),
        "terms": {k: v.tolist() for k, v in r.terms.items()},
        "equivariance_defect": equivariance_defect(p, g),
    }


def _text_matrix(m):
    return "\n".join("  " + " ".join(f"{x:>14.8g}" for x in row) for row in np.atleast_2d(m))


def cmd_ricci(args) -> int:
    p, *_ = _load_space(args)
    runs = []
    failed = False
    for seed in _seeds(args):
        g = _metric(args, p, seed)
        r = ricci_tensor(p, g)
        doc = _ricci_doc(p, g, r)
        if seed is not None:
            doc["seed"] = seed
        if args.verify:
            o = ricci_oracle(p, g)
            err = float(np.abs(r.tensor - o.tensor).max())
            tol = ORACLE_TOL * (1.0 + np.abs(r.tensor).max())
            doc["oracle_error"] = err
            doc["oracle_ok"] = err <= tol
            failed |= err > tol
        runs.append(doc)
    if args.format == "text" and not args.sweep:
        d = runs[0]
        print("ricci tensor:")
        print(_text_matrix(d["tensor"]))
        print("operator eigenvalues:", " ".join(f"{x:.10g}" for x in d["operator_eigenvalues"]))
        print(f"scalar: {d['scalar']:.12g}")
        for name, m in d["terms"].items():
            print(f"{name} term:")
            print(_text_matrix(m))
        if args.verify:
            print(f"oracle error: {d['oracle_error']:.3e}")
    else:
        _emit(runs[0] if not args.sweep else {"runs": runs}, args)
    return EXIT_CLAIM if failed else EXIT_OK


def _pick_ideal(args, p, ideal, cands):
    if args.auto:
        best = None
        for c in cands:
            try:
                s = reduce_to_semisimple(p, c)
            except HypothesisError:
                continue
            if best is None or s.dim > best.dim:
                best = s
        if best is None:
            raise HypothesisError("no candidate reduces to a compact semisimple ideal")
        return best
    if ideal is None:
        raise InputError("no ideal given; add ideal_basis to the document or pass --auto")
    return ideal


def cmd_bochner(args) -> int:
    p, ideal, cands, _ = _load_space(args)
    k = _pick_ideal(args, p, ideal, cands)
    runs = []
    violated = False
    for seed in _seeds(args):
        g = _metric(args, p, seed)
        data = build_bochner(p, g, k)
        audit = mixed_term_audit(p, g, k, data)
        doc = {
            "eigenvalues": data.eigenvalues.tolist(),
            "X": p.to_ambient(data.top_direction).tolist(),
            "b": data.killing_bound,
            "audit": audit.as_dict(),
            "fiber_dim": data.fiber.dim,
        }
        try:
            pd = positive_direction(p, g, k, data)
            doc.update(ric_value=pd.ric_value, bound=pd.bound, bound_holds=True)
        except BochnerViolation as exc:
            doc.update(ric_value=audit.ric_value,
                       bound=-0.25 * float(data.top_direction @ p.killing_m @ data.top_direction),
                       bound_holds=False, error=str(exc))
            violated = True
        violated |= not audit.ok
        if seed is not None:
            doc["seed"] = seed
        runs.append(doc)
    _emit(runs[0] if not args.sweep else {"runs": runs}, args)
    return EXIT_CLAIM if violated else EXIT_OK


def _flow_options(args) -> FlowOptions:
    return FlowOptions(t_max=args.t_max, rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                       sample_dt=args.sample_dt, extinction_eps=args.extinction_eps,
                       max_steps=args.max_steps)


def _run_flow(p, g, k, opts):
    data = build_bochner(p, g, k) if k is not None else None
    return integrate(p, g, opts, bochner=data)


def _flow_claims(res, opts) -> bool:
    """True when the run is consistent with the extinction criterion (if it applies)."""
    if res.scalar_violations:
        return False
    if res.extinction_bound is None:
        return True
    # a horizon short of the bound is inconclusive, not a violation
    time_tol = 1e-3 * res.extinction_bound
    return not res.slope_violations and res.verdict.time <= res.extinction_bound + time_tol


def cmd_flow(args) -> int:
    p, ideal, _, _ = _load_space(args)
    opts = _flow_options(args)
    if not args.sweep:
        g = _metric(args, p)
        res = _run_flow(p, g, ideal, opts)
        doc = serialize.verdict_document(res)
        if args.out:
            out = Path(args.out)
            serialize.write_trajectory_csv(res, out.with_suffix(".csv"))
            if args.emit_plot_data:
                serialize.write_plot_data(res, out.with_suffix(".plot.csv"))
        _emit(doc, args)
        if res.verdict.kind == "StepFailure":
            return EXIT_NUMERIC
        return EXIT_OK if _flow_claims(res, opts) else EXIT_CLAIM
    runs = []
    for seed in _seeds(args):
        g = _metric(args, p, seed)
        res = _run_flow(p, g, ideal, opts)
        row = {"seed": seed, "verdict": res.verdict.as_dict(),
               "slope_violations": len(res.slope_violations),
               "scalar_violations": len(res.scalar_violations),
               "claims_ok": _flow_claims(res, opts)}
        if res.extinction_bound is not None:
            row["extinction_bound"] = res.extinction_bound
            row["ratio"] = res.verdict.time / res.extinction_bound
        runs.append(row)
    runs.sort(key=lambda r: r["seed"])
    ratios = [r["ratio"] for r in runs if r["verdict"]["kind"] == "Extinct" and "ratio" in r]
    doc = {
        "runs": runs,
        "count": len(runs),
        "extinct": sum(r["verdict"]["kind"] == "Extinct" for r in runs),
        "reached_horizon": sum(r["verdict"]["kind"] == "ReachedHorizon" for r in runs),
        "step_failures": sum(r["verdict"]["kind"] == "StepFailure" for r in runs),
        "max_ratio": max(ratios) if ratios else None,
        "all_claims_ok": all(r["claims_ok"] for r in runs),
    }
    _emit(doc, args)
    if doc["step_failures"]:
        return EXIT_NUMERIC
    return EXIT_OK if doc["all_claims_ok"] else EXIT_CLAIM


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homricci",
                                     description="Homogeneous Ricci flow laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, metric=True):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--builtin", help=f"catalog entry ({', '.join(catalog.names())})")
        src.add_argument("--space-file", help="presentation or algebra JSON document")
        if metric:
            sp.add_argument("--metric", default="identity",
                            help="'identity', 'random' or a metric JSON file")
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--sweep", type=int, default=0,
                            help="run over N random metrics with seeds seed..seed+N-1")
        sp.add_argument("--out", help="output path prefix")

    sp = sub.add_parser("check", help="validate algebra and presentation")
    common(sp, metric=False)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("ricci", help="Ricci tensor of an invariant metric")
    common(sp)
    sp.add_argument("--verify", action="store_true", help="cross-check against the oracle")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.set_defaults(func=cmd_ricci)

    sp = sub.add_parser("bochner", help="positive Ricci direction along a compact ideal")
    common(sp)
    sp.add_argument("--auto", action="store_true",
                    help="reduce the listed candidate ideals and use the largest success")
    sp.set_defaults(func=cmd_bochner)

    sp = sub.add_parser("flow", help="integrate the homogeneous Ricci flow")
    common(sp)
    sp.add_argument("--t-max", type=float, default=10.0)
    sp.add_argument("--sample-dt", type=float, default=0.01)
    sp.add_argument("--rel-tol", type=float, default=1e-8)
    sp.add_argument("--abs-tol", type=float, default=1e-10)
    sp.add_argument("--extinction-eps", type=float, default=1e-6)
    sp.add_argument("--max-steps", type=int, default=200_000)
    sp.add_argument("--emit-plot-data", action="store_true",
                    help="also write a long-format t,series,value CSV")
    sp.set_defaults(func=cmd_flow)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "sweep", 0) and args.metric != "random":
        args.metric = "random"
    try:
        return args.func(args)
    except (InputError, PresentationError, LieAlgebraError, MetricError, HypothesisError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        kernel = getattr(exc, "kernel", None)
        if kernel is not None:
            print(serialize.dumps({"error": str(exc), "effectiveness_kernel": kernel.basis}))
        return EXIT_INPUT
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
