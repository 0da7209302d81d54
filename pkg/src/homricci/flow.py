"""Homogeneous Ricci flow ``dP/dt = -2 ric(P)`` on the metric operator.

Integration uses the Dormand-Prince 5(4) embedded pair.  The local error is
measured both entrywise (``abs_tol + rel_tol |P|``) and relative to the
metric itself (``|P^-1/2 E P^-1/2| / rel_tol``), so directions collapsing
towards an extinction stay resolved.  A step is rejected when any stage
leaves the positive definite cone, so the metric approaches a degeneration
from inside.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .bochner import BochnerData
from .curvature import ricci_tensor
from .presentation import MetricError, Presentation, as_operator

log = logging.getLogger(__name__)

SLOPE_TOL = 1e-4
COMPARISON_TOL = 1e-6
SCALAR_TOL = 1e-6
SCALAR_SIGN_TOL = 1e-12  # roundoff allowance for flows converging to flat metrics

# Dormand-Prince 5(4)
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array(_A[6] + [0.0])
_E = _B5 - np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                     187 / 2100, 1 / 40])


@dataclass(frozen=True)
class FlowOptions:
    t_max: float = 10.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    sample_dt: float = 0.01
    extinction_eps: float = 1e-6
    max_steps: int = 200_000

    def __post_init__(self):
        for name in ("t_max", "rel_tol", "abs_tol", "sample_dt", "extinction_eps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.extinction_eps < 1:
            raise ValueError("extinction_eps must be < 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")


@dataclass(frozen=True)
class Verdict:
    kind: str  # "Extinct", "ReachedHorizon" or "StepFailure"
    time: float
    reason: str = ""

    @property
    def extinct(self) -> bool:
        return self.kind == "Extinct"

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "time": self.time}
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class Sample:
    t: float
    P: np.ndarray
    eigenvalues: np.ndarray
    scalar: float
    k: float  # nan without fiber data
    ric_norm: float


@dataclass
class FlowResult:
    samples: list[Sample]
    verdict: Verdict
    step_t: np.ndarray
    step_k: np.ndarray
    step_scalar: np.ndarray
    slope_violations: list[int] = field(default_factory=list)
    scalar_violations: list[int] = field(default_factory=list)
    positive_scalar: list[int] = field(default_factory=list)
    killing_bound: float | None = None
    extinction_bound: float | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def metrics(self) -> np.ndarray:
        return np.array([s.P for s in self.samples])


def flow_rhs(p: Presentation, P) -> np.ndarray:
    """``-2 ric(P)`` in m-coordinates."""
    return -2.0 * ricci_tensor(p, as_operator(P)).tensor


def fiber_sup(bochner: BochnerData, P) -> float:
    """``max <P V, V>`` over background-unit ``V`` in m_k."""
    q = bochner.fiber_coords
    r = q.T @ as_operator(P) @ q
    return float(np.linalg.eigvalsh(0.5 * (r + r.T))[-1])


def extinction_bound(bochner: BochnerData, g0) -> float:
    """Upper bound ``2 k(0) / |b|`` for the extinction time."""
    b = bochner.killing_bound
    if not b < 0:
        raise ValueError("Killing bound must be negative")
    return 2.0 * fiber_sup(bochner, g0) / abs(b)


class _NotPositive(Exception):
    pass


def _inv_sqrt(P: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(P)
    return (v / np.sqrt(w)) @ v.T


def _min_eig(P: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(P)[0])


def _rhs_checked(p, P):
    if not np.all(np.isfinite(P)):
        raise FloatingPointError("non-finite metric")
    try:
        np.linalg.cholesky(P)
    except np.linalg.LinAlgError:
        raise _NotPositive() from None
    try:
        return ricci_tensor(p, P)
    except (MetricError, np.linalg.LinAlgError):
        raise _NotPositive() from None


def integrate(p: Presentation, g0, opts: FlowOptions | None = None,
              bochner: BochnerData | None = None) -> FlowResult:
    """Integrate the flow from ``g0`` until extinction, the horizon, or failure."""
    opts = opts or FlowOptions()
    P = np.array(as_operator(g0), dtype=float)
    lam0 = _min_eig(P)
    if lam0 <= 0:
        raise MetricError("initial metric is not positive definite")
    floor = opts.extinction_eps * lam0

    def kval(M):
        return fiber_sup(bochner, M) if bochner is not None else np.nan

    t = 0.0
    ric = ricci_tensor(p, P)
    f = -2.0 * ric.tensor
    ric_norm0 = float(np.abs(ric.tensor).max())
    samples = [_sample(t, P, ric, kval(P))]
    step_t, step_k, step_s = [t], [kval(P)], [ric.scalar]
    next_sample = opts.sample_dt
    h = _initial_step(P, f, opts)
    verdict = None
    n_steps = 0
    last_ric = ric

    while verdict is None:
        if n_steps >= opts.max_steps:
            verdict = Verdict("StepFailure", t, "max_steps exceeded")
            break
        target = min(next_sample, opts.t_max)
        h = min(h, target - t)
        if h <= 1e-13 * max(1.0, t):
            growing = float(np.abs(last_ric.tensor).max()) > 10 * max(ric_norm0, 1e-12)
            if growing or _min_eig(P) < 1e-3 * lam0:
                verdict = Verdict("Extinct", t, "step size underflow with curvature growth")
            else:
                verdict = Verdict("StepFailure", t, "step size underflow")
            break
        n_steps += 1
        try:
            k_stages = [f]
            for i in range(1, 7):
                y = P + h * sum(a * kk for a, kk in zip(_A[i], k_stages) if a)
                stage_ric = _rhs_checked(p, y)
                k_stages.append(-2.0 * stage_ric.tensor)
        except _NotPositive:
            h *= 0.5
            continue
        except FloatingPointError:
            verdict = Verdict("StepFailure", t, "non-finite values")
            break
        P_new = P + h * sum(b * kk for b, kk in zip(_B5, k_stages) if b)
        err_vec = h * sum(e * kk for e, kk in zip(_E, k_stages) if e)
        scale = opts.abs_tol + opts.rel_tol * np.maximum(np.abs(P), np.abs(P_new))
        err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
        # metric-relative error keeps collapsing directions resolved
        w = _inv_sqrt(P)
        err = max(err, float(np.sqrt(np.mean((w @ err_vec @ w) ** 2))) / opts.rel_tol)
        if not np.isfinite(err):
            verdict = Verdict("StepFailure", t, "non-finite error estimate")
            break
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            continue
        lam = _min_eig(P_new)
        if lam <= 0:
            h *= 0.5
            continue
        # accepted
        t_new = target if target - (t + h) <= 1e-14 * max(1.0, t) else t + h
        t, P = t_new, P_new
        f = k_stages[6]  # FSAL
        last_ric = stage_ric
        step_t.append(t)
        step_k.append(kval(P))
        step_s.append(last_ric.scalar)
        factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= factor
        if lam < floor:
            samples.append(_sample(t, P, last_ric, step_k[-1]))
            verdict = Verdict("Extinct", t, "metric eigenvalue below extinction floor")
            break
        if t >= next_sample - 1e-14 * max(1.0, t):
            samples.append(_sample(t, P, last_ric, step_k[-1]))
            next_sample = _next_sample(t, opts.sample_dt)
        if t >= opts.t_max - 1e-14 * max(1.0, opts.t_max):
            if samples[-1].t != t:
                samples.append(_sample(t, P, last_ric, step_k[-1]))
            verdict = Verdict("ReachedHorizon", t)

    if samples[-1].t != t:
        samples.append(_sample(t, P, last_ric, step_k[-1]))

    res = FlowResult(samples, verdict, np.array(step_t), np.array(step_k), np.array(step_s))
    res.scalar_violations = scalar_monotonicity_violations(res)
    res.positive_scalar = positive_scalar_samples(res)
    if bochner is not None:
        res.killing_bound = bochner.killing_bound
        res.extinction_bound = extinction_bound(bochner, g0)
        res.slope_violations = check_slope_bound(res, bochner.killing_bound)
    log.debug("flow finished: %s after %d steps", verdict, n_steps)
    return res


def _next_sample(t, dt):
    n = np.floor(t / dt + 1e-9) + 1
    return float(n * dt)


def _initial_step(P, f, opts):
    scale = opts.abs_tol + opts.rel_tol * np.abs(P)
    d0 = np.sqrt(np.mean((P / scale) ** 2))
    d1 = np.sqrt(np.mean((f / scale) ** 2))
    h = 0.01 * d0 / d1 if d1 > 1e-5 and d0 > 1e-5 else 1e-6
    return float(min(h, opts.sample_dt, opts.t_max))


def _sample(t, P, ric, k) -> Sample:
    return Sample(float(t), P.copy(), np.linalg.eigvalsh(P), float(ric.scalar), float(k),
                  float(np.abs(ric.tensor).max()))


def check_slope_bound(result: FlowResult, b: float, slope_tol: float = SLOPE_TOL) -> list[int]:
    """Indices ``i`` where ``(k_{i+1} - k_i) / dt > b/2 + slope_tol`` over accepted steps."""
    t, k = result.step_t, result.step_k
    if len(t) < 2 or np.all(np.isnan(k)):
        raise ValueError("flow result carries no fiber samples")
    q = np.diff(k) / np.diff(t)
    return [int(i) for i in np.flatnonzero(q > 0.5 * b + slope_tol)]


def scalar_monotonicity_violations(result: FlowResult, tol: float = SCALAR_TOL) -> list[int]:
    s = result.step_scalar
    drop = s[:-1] - s[1:]
    return [int(i) for i in np.flatnonzero(drop > tol * np.maximum(1.0, np.abs(s[:-1])))]


def positive_scalar_samples(result: FlowResult, tol: float = SCALAR_SIGN_TOL) -> list[int]:
    """Sample indices with scalar curvature above ``tol * max(1, |scal(0)|)``.

    Nonpositive scalar curvature along the whole flow is the immortality
    signal; the allowance absorbs roundoff once the metric is nearly flat.
    """
    s = np.array([x.scalar for x in result.samples])
    return [int(i) for i in np.flatnonzero(s > tol * max(1.0, abs(s[0])))]
