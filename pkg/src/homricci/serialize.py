"""JSON documents for algebras, presentations and metrics; CSV flow trajectories."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .algebra import LieAlgebra, Subspace
from .catalog import CatalogEntry
from .flow import FlowResult
from .presentation import Metric, Presentation, make_presentation


def algebra_to_document(a: LieAlgebra) -> dict:
    return {
        "dim": a.dim,
        "labels": list(a.labels),
        "brackets": [[i, j, k, c] for i, j, k, c in a.brackets()],
    }


def algebra_from_document(doc: dict, check: bool = True) -> LieAlgebra:
    """Build an algebra from ``{"dim", "labels", "brackets"}``, Jacobi-checked unless ``check`` is off."""
    try:
        dim = int(doc["dim"])
        brackets = doc.get("brackets", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed algebra document: {exc}") from None
    for entry in brackets:
        if len(entry) != 4:
            raise ValueError(f"bracket entry must be [i, j, k, c], got {entry!r}")
        i, j, k = (int(x) for x in entry[:3])
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise ValueError(f"bracket index out of range in {entry!r}")
    return LieAlgebra.from_brackets(dim, brackets, labels=doc.get("labels"), check=check)


def presentation_to_document(p: Presentation) -> dict:
    n = p.algebra.dim
    bg = p.background
    doc = {
        "algebra": algebra_to_document(p.algebra),
        "isotropy_basis": p.isotropy.basis.tolist(),
        "background": "identity" if np.array_equal(bg, np.eye(n)) else bg.tolist(),
    }
    if p.name:
        doc["name"] = p.name
    return doc


def entry_to_document(entry: CatalogEntry) -> dict:
    doc = presentation_to_document(entry.presentation)
    if entry.compact_ideal is not None:
        doc["ideal_basis"] = entry.compact_ideal.basis.tolist()
    doc["expected"] = entry.expected.value
    doc["notes"] = entry.notes
    return doc


def _subspace(n, rows) -> Subspace:
    rows = np.asarray(rows if rows is not None else [], dtype=float).reshape(-1, n)
    return Subspace(n, rows)


def presentation_from_document(doc: dict, base: Path | None = None,
                               validate: bool = True) -> Presentation:
    """Presentation from a document; ``validate=False`` skips every check (for reporting)."""
    alg = doc.get("algebra")
    if isinstance(alg, str):
        path = Path(alg)
        if base is not None and not path.is_absolute():
            path = base / path
        alg = json.loads(path.read_text())
    if not isinstance(alg, dict):
        raise ValueError("presentation document needs an algebra (inline or path)")
    a = algebra_from_document(alg, check=validate)
    iso = _subspace(a.dim, doc.get("isotropy_basis"))
    bg = doc.get("background", "identity")
    if validate:
        return make_presentation(a, iso, bg, name=doc.get("name"))
    gram = np.eye(a.dim) if isinstance(bg, str) else np.asarray(bg, dtype=float)
    if gram.shape != (a.dim, a.dim):
        raise ValueError("background must be an n x n matrix")
    return Presentation(a, iso, gram, name=doc.get("name"))


def ideal_from_document(doc: dict, n: int) -> Subspace | None:
    rows = doc.get("ideal_basis")
    return None if rows is None else _subspace(n, rows)


def ideal_candidates_from_document(doc: dict, n: int) -> list[Subspace]:
    return [_subspace(n, rows) for rows in doc.get("ideal_candidates", [])]


def metric_to_document(g: Metric) -> dict:
    return {"operator": np.asarray(g.operator).tolist()}


def metric_from_document(doc: dict) -> Metric:
    return Metric(np.asarray(doc["operator"], dtype=float))


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def _fmt(x: float) -> str:
    # repr round-trips IEEE-754 doubles
    return repr(float(x))


def trajectory_header(d: int) -> list[str]:
    cols = ["t"] + [f"p_{i + 1}{j + 1}" if d < 10 else f"p_{i + 1}_{j + 1}"
                    for i in range(d) for j in range(i, d)]
    return cols + ["lambda_min", "lambda_max", "scalar", "k_fiber", "ric_norm"]


def write_trajectory_csv(result: FlowResult, path) -> None:
    """One row per sample: time, upper triangle of P (row-major), monitors."""
    d = result.samples[0].P.shape[0]
    iu = np.triu_indices(d)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(trajectory_header(d))
        for s in result.samples:
            row = [s.t, *s.P[iu], s.eigenvalues[0], s.eigenvalues[-1], s.scalar, s.k, s.ric_norm]
            w.writerow([_fmt(x) for x in row])


def read_trajectory_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def write_plot_data(result: FlowResult, path) -> None:
    """Long-format ``t,series,value`` rows for external plotting."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "series", "value"])
        for s in result.samples:
            for i, lam in enumerate(s.eigenvalues):
                w.writerow([_fmt(s.t), f"lambda_{i + 1}", _fmt(lam)])
            w.writerow([_fmt(s.t), "scalar", _fmt(s.scalar)])
            if not math.isnan(s.k):
                w.writerow([_fmt(s.t), "k_fiber", _fmt(s.k)])
            w.writerow([_fmt(s.t), "ric_norm", _fmt(s.ric_norm)])


def verdict_document(result: FlowResult) -> dict:
    out = {
        "verdict": result.verdict.as_dict(),
        "samples": len(result.samples),
        "accepted_steps": len(result.step_t) - 1,
        "slope_violations": result.slope_violations,
        "scalar_violations": result.scalar_violations,
        "positive_scalar_samples": len(result.positive_scalar),
        "scalar_max": max(s.scalar for s in result.samples),
    }
    if result.killing_bound is not None:
        out["killing_bound"] = result.killing_bound
        out["extinction_bound"] = result.extinction_bound
    return out


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=_default, allow_nan=True)


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")
