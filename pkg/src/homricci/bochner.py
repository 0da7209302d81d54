"""Positive Ricci direction along a compact semisimple ideal.

Given a compact semisimple ideal ``k`` of ``g``, split ``k = k' ⊕ m_k`` with
``k' = k ∩ h`` and ``m_k`` its background-orthogonal complement, restrict the
metric operator to ``m_k`` and take a top eigenvector ``X``.  Then
``ric(X, X) >= -B(X, X) / 4 > 0`` for every invariant metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import (
    IDEAL_TOL,
    Subspace,
    derived_subalgebra,
    intersect,
    is_compact_semisimple,
    is_ideal,
)
from .curvature import mean_curvature, ricci_quadratic
from .presentation import Presentation, PresentationError, as_operator

BOCHNER_TOL = 1e-8
_TIE_TOL = 1e-9


class HypothesisError(ValueError):
    """The candidate ideal does not satisfy the compact semisimple hypothesis."""


class BochnerViolation(AssertionError):
    """The Ricci lower bound failed beyond tolerance."""


def reduce_to_semisimple(p: Presentation, k: Subspace) -> Subspace:
    """Iterate the derived series of the ideal ``k`` until it stabilizes."""
    a = p.algebra
    res = is_ideal(a, k)
    if res > IDEAL_TOL:
        raise HypothesisError(f"candidate is not an ideal (residual {res:.3e})")
    s = Subspace.span(a.dim, k.basis)
    steps = 0
    while s.dim:
        nxt = derived_subalgebra(a, s)
        steps += 1
        if nxt.dim == s.dim:
            break
        s = nxt
    if s.dim == 0:
        raise HypothesisError(f"ideal has no semisimple part: derived series reaches 0 "
                              f"after {steps} steps")
    cert = is_compact_semisimple(a, s)
    if not cert:
        raise HypothesisError(
            f"perfect part of the ideal is not compact semisimple "
            f"(Killing eigenvalues {np.round(cert.eigenvalues, 6).tolist()})")
    return s


def _gram_schmidt(vectors: np.ndarray, count: int) -> np.ndarray:
    """Orthonormalize rows in order, dropping near-dependent ones."""
    out: list[np.ndarray] = []
    for v in vectors:
        if len(out) == count:
            break
        w = v.astype(float).copy()
        scale = np.linalg.norm(w)
        for _ in range(2):
            for u in out:
                w -= (u @ w) * u
        nw = np.linalg.norm(w)
        if scale > 0 and nw > 1e-8 * scale:
            out.append(w / nw)
    if len(out) != count:
        raise ValueError("rank deficiency while orthonormalizing")
    return np.array(out).reshape(count, -1)


@dataclass(frozen=True)
class BochnerData:
    ideal: Subspace
    fiber_isotropy: Subspace
    fiber: Subspace
    fiber_coords: np.ndarray  # (d, r) background-orthonormal basis of m_k in m-coordinates
    restricted: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    top_direction: np.ndarray  # m-coordinates, background-unit
    killing_bound: float


def _fiber(p: Presentation, k: Subspace) -> tuple[Subspace, Subspace, np.ndarray]:
    gram = p.background
    kprime = intersect(k, p.isotropy)
    kb = k.orthonormal().T
    if kprime.dim:
        kp = kprime.basis.T
        proj = np.eye(p.algebra.dim) - kp @ np.linalg.solve(kp.T @ gram @ kp, kp.T @ gram)
        vecs = (proj @ kb).T
    else:
        vecs = kb.T
    r = k.dim - kprime.dim
    if r == 0:
        raise PresentationError("m_k = {0}: the ideal lies in the isotropy, so the "
                                "presentation is not almost-effective")
    coords = p.to_m(vecs)
    back = p.to_ambient(coords)
    if np.abs(back - vecs).max() > 1e-8 * max(1.0, np.abs(vecs).max()):
        # h does not split along k; the complement h-perp does not contain m_k
        raise PresentationError("m_k is not contained in the background-orthogonal complement "
                                "of h; choose a background for which h = k' ⊕ (h ∩ k-perp)")
    q = _gram_schmidt(coords, r).T
    return kprime, Subspace(p.algebra.dim, p.to_ambient(q.T)), q


def _top_direction(vals: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Deterministic unit vector in the top eigenspace."""
    top = vals[-1]
    sel = vals >= top - _TIE_TOL * max(1.0, abs(top))
    e = vecs[:, sel]
    proj = e @ e.T
    norms = np.linalg.norm(proj, axis=0)
    j = int(np.argmax(norms >= norms.max() - 1e-12))
    y = proj[:, j] / norms[j]
    nz = np.flatnonzero(np.abs(y) > 1e-12)
    if nz.size and y[nz[0]] < 0:
        y = -y
    return y


def build_bochner(p: Presentation, g, k: Subspace) -> BochnerData:
    """Fiber splitting and restricted metric for the compact semisimple ideal ``k``."""
    a = p.algebra
    res = is_ideal(a, k)
    if res > IDEAL_TOL:
        raise HypothesisError(f"candidate is not an ideal (residual {res:.3e})")
    cert = is_compact_semisimple(a, k)
    if not cert:
        raise HypothesisError("ideal is not compact semisimple; try reduce_to_semisimple first")
    P = as_operator(g)
    kprime, fiber, q = _fiber(p, k)
    restricted = q.T @ P @ q
    restricted = 0.5 * (restricted + restricted.T)
    vals, vecs = np.linalg.eigh(restricted)
    if vals[0] <= 0:
        raise PresentationError("restricted operator is not positive definite")
    y = _top_direction(vals, vecs)
    b = float(np.linalg.eigvalsh(q.T @ p.killing_m @ q)[-1])
    if b >= 0:
        raise HypothesisError(f"Killing form is not negative on m_k (max eigenvalue {b:.3e})")
    return BochnerData(k, kprime, fiber, q, restricted, vals, q @ vecs, q @ y, b)


class PositiveDirection(NamedTuple):
    direction: np.ndarray  # m-coordinates
    ric_value: float
    bound: float


def positive_direction(p: Presentation, g, k: Subspace, data: BochnerData | None = None,
                       tol: float = BOCHNER_TOL) -> PositiveDirection:
    """Top eigendirection ``X`` with ``ric(X, X)`` and the bound ``-B(X, X)/4``.

    Raises :class:`BochnerViolation` if the bound fails.
    """
    if data is None:
        data = build_bochner(p, g, k)
    x = data.top_direction
    bound = -0.25 * float(x @ p.killing_m @ x)
    ric = ricci_quadratic(p, g, x)
    if not bound > 0:
        raise BochnerViolation(f"-B(X,X)/4 = {bound:.3e} is not positive")
    if ric < bound - tol:
        raise BochnerViolation(f"ric(X,X) = {ric:.12g} below the bound {bound:.12g}")
    return PositiveDirection(x, ric, bound)


@dataclass(frozen=True)
class MixedTermAudit:
    """Decomposition of ``ric(X, X)`` along the frame ``U`` of m_k and ``V`` of its g-complement."""

    killing: float
    fiber_derivation: float
    fiber_squares: float
    mean_curvature_term: float
    mixed_squares: float
    mixed_derivation: float
    complement_squares: float
    ric_value: float

    @property
    def fiber_part(self) -> float:
        return self.killing + self.fiber_derivation + self.fiber_squares

    @property
    def mixed_difference(self) -> float:
        return self.mixed_squares - self.mixed_derivation

    @property
    def reconstruction_error(self) -> float:
        total = (self.fiber_part - self.mean_curvature_term + 0.5 * self.mixed_difference
                 + 0.25 * self.complement_squares)
        return abs(total - self.ric_value)

    @property
    def ok(self) -> bool:
        return abs(self.mean_curvature_term) <= 1e-9 and self.mixed_difference >= -1e-9

    def as_dict(self) -> dict:
        return {
            "killing": self.killing,
            "fiber_derivation": self.fiber_derivation,
            "fiber_squares": self.fiber_squares,
            "fiber_part": self.fiber_part,
            "mean_curvature_term": self.mean_curvature_term,
            "mixed_squares": self.mixed_squares,
            "mixed_derivation": self.mixed_derivation,
            "mixed_difference": self.mixed_difference,
            "complement_squares": self.complement_squares,
            "ric_value": self.ric_value,
            "reconstruction_error": self.reconstruction_error,
        }


def mixed_term_audit(p: Presentation, g, k: Subspace, data: BochnerData | None = None
                     ) -> MixedTermAudit:
    P = as_operator(g)
    if data is None:
        data = build_bochner(p, P, k)
    T = p.bracket_m_tensor
    x = data.top_direction
    U = (data.eigenvectors / np.sqrt(data.eigenvalues)).T  # rows, g-orthonormal
    d, r = p.dim_m, len(data.eigenvalues)
    if d > r:
        _, s, vt = np.linalg.svd((P @ data.fiber_coords).T)
        w = vt[r:]
        gw = w @ P @ w.T
        ev, evec = np.linalg.eigh(gw)
        V = (evec / np.sqrt(ev)).T @ w
    else:
        V = np.zeros((0, d))

    def br(u, v):
        return np.einsum("...a,...b,abc->...c", u, v, T)

    def gsq(y):
        y = np.atleast_2d(y)
        return float(np.einsum("na,ab,nb->", y, P, y))

    px = P @ x
    xu = br(x[None, :], U)
    uu = br(U[:, None, :], U[None, :, :]) @ px
    uv = br(U[:, None, :], V[None, :, :]) @ px if len(V) else np.zeros(0)
    xv = br(x[None, :], V) if len(V) else np.zeros((0, d))
    vv = br(V[:, None, :], V[None, :, :]) @ px if len(V) else np.zeros(0)
    H = mean_curvature(p, P)
    mean = float(br(H, x) @ px)
    return MixedTermAudit(
        killing=-0.5 * float(x @ p.killing_m @ x),
        fiber_derivation=-0.5 * gsq(xu),
        fiber_squares=0.25 * float(np.sum(uu ** 2)),
        mean_curvature_term=mean,
        mixed_squares=float(np.sum(uv ** 2)),
        mixed_derivation=gsq(xv),
        complement_squares=float(np.sum(vv ** 2)),
        ric_value=ricci_quadratic(p, P, x),
    )
