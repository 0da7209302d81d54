"""Ricci curvature of invariant metrics on reductive homogeneous spaces.

The primary route evaluates the homogeneous Ricci formula

    ric(X, X) = -1/2 B(X, X) - 1/2 sum_i |[X, X_i]_m|^2
                + 1/4 sum_ij g([X_i, X_j]_m, X)^2 - g([H, X]_m, X)

on a g-orthonormal frame ``X_i`` and polarizes.  :func:`ricci_oracle` gets the
same tensor from the Levi-Civita (Nomizu) map and its curvature operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .presentation import Presentation, as_operator, orthonormal_frame

TERM_NAMES = ("killing", "derivation", "squares", "mean_curvature")


@dataclass(frozen=True)
class RicciData:
    """Ricci tensor (bilinear form, m-coordinates), Ricci operator, scalar curvature.

    ``terms`` holds the polarized contribution of each summand of the formula;
    the oracle route leaves it empty.
    """

    tensor: np.ndarray
    operator: np.ndarray
    scalar: float
    mean_curvature: np.ndarray
    terms: dict = field(default_factory=dict)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of the Ricci operator (real; it is g-self-adjoint)."""
        return np.sort(np.linalg.eigvals(self.operator).real)


def mean_curvature(p: Presentation, g) -> np.ndarray:
    """``H`` in m-coordinates with ``g(H, X) = tr(ad_X)``."""
    P = as_operator(g)
    return np.linalg.solve(P, p.trace_form_m)


def _frame_terms(p: Presentation, P: np.ndarray, frame: np.ndarray, x: np.ndarray) -> np.ndarray:
    """The four summands for each row of ``x``; shape (4, N)."""
    T = p.bracket_m_tensor
    killing = -0.5 * np.einsum("na,ab,nb->n", x, p.killing_m, x)
    # [x, f_i]_m
    xf = np.einsum("na,ib,abc->nic", x, frame, T)
    derivation = -0.5 * np.einsum("nic,cd,nid->n", xf, P, xf)
    ff = np.einsum("ia,jb,abc->ijc", frame, frame, T)
    proj = np.einsum("ijc,cd,nd->nij", ff, P, x)
    squares = 0.25 * np.einsum("nij,nij->n", proj, proj)
    H = np.linalg.solve(P, p.trace_form_m)
    if np.any(H):
        hx = np.einsum("a,nb,abc->nc", H, x, T)
        mean = -np.einsum("nc,cd,nd->n", hx, P, x)
    else:
        mean = np.zeros(len(x))
    return np.array([killing, derivation, squares, mean])


def ricci_terms(p: Presentation, g, x, frame: np.ndarray | None = None) -> dict:
    """Per-term values of ``ric(X, X)`` for ``X`` in m-coordinates."""
    P = as_operator(g)
    if frame is None:
        frame = orthonormal_frame(p, P)
    x = np.asarray(x, dtype=float)
    vals = _frame_terms(p, P, frame, np.atleast_2d(x))
    if x.ndim == 1:
        vals = vals[:, 0]
    return dict(zip(TERM_NAMES, vals))


def ricci_quadratic(p: Presentation, g, x, frame: np.ndarray | None = None):
    """``ric(X, X)``; ``x`` may be a single m-vector or a stack of them."""
    P = as_operator(g)
    if frame is None:
        frame = orthonormal_frame(p, P)
    x = np.asarray(x, dtype=float)
    q = _frame_terms(p, P, frame, np.atleast_2d(x)).sum(axis=0)
    return float(q[0]) if x.ndim == 1 else q


def _polarization_vectors(d: int):
    iu = np.triu_indices(d, k=1)
    eye = np.eye(d)
    return np.vstack([eye, eye[iu[0]] + eye[iu[1]]]), iu


def ricci_tensor(p: Presentation, g) -> RicciData:
    P = as_operator(g)
    d = p.dim_m
    frame = orthonormal_frame(p, P)
    vecs, iu = _polarization_vectors(d)
    vals = _frame_terms(p, P, frame, vecs)
    terms = {}
    for name, v in zip(TERM_NAMES, vals):
        diag = v[:d]
        m = np.diag(diag)
        off = 0.5 * (v[d:] - diag[iu[0]] - diag[iu[1]])
        m[iu] = off
        m[iu[1], iu[0]] = off
        terms[name] = m
    ric = sum(terms.values())
    return _assemble(p, P, ric, terms)


def _assemble(p, P, ric, terms) -> RicciData:
    ric = 0.5 * (ric + ric.T)
    op = np.linalg.solve(P, ric)
    return RicciData(ric, op, float(np.trace(op)), mean_curvature(p, P), terms)


def ricci_oracle(p: Presentation, g) -> RicciData:
    """Ricci tensor from the Levi-Civita connection on m.

    ``Λ(X)Y = 1/2 [X, Y]_m + U(X, Y)``, curvature
    ``R(X, Y) = [Λ(X), Λ(Y)] - Λ([X, Y]_m) - ad([X, Y]_h)|_m`` and
    ``ric(Y, Z) = tr(X -> R(X, Y) Z)``.
    """
    P = as_operator(g)
    T = p.bracket_m_tensor
    d = p.dim_m
    if d == 0:
        z = np.zeros((0, 0))
        return RicciData(z, z, 0.0, np.zeros(0))
    tp = np.einsum("cak,kb->cab", T, P)
    w = 0.5 * (tp + tp.transpose(0, 2, 1))  # w[c, a, b] = g(U(e_a, e_b), e_c)
    U = np.linalg.solve(P, w.reshape(d, d * d)).reshape(d, d, d)  # U[:, a, b]
    # lam[a, i, b] = (Λ(e_a) e_b)_i
    lam = 0.5 * T.transpose(0, 2, 1) + U.transpose(1, 0, 2)
    comm = np.einsum("aij,bjk->abik", lam, lam)
    curv = comm - comm.transpose(1, 0, 2, 3) - np.einsum("abc,cik->abik", T, lam)
    hpart = p.bracket_h_tensor
    if np.any(hpart):
        ad = np.einsum("abk,kij->abij", hpart, p.algebra.ad_matrices())
        gm = p.background @ p.m_basis
        curv = curv - np.einsum("ia,xyij,jb->xyab", gm, ad, p.m_basis)
    ric = np.einsum("abac->bc", curv)
    return _assemble(p, P, ric, {})


def scalar_curvature(p: Presentation, g) -> float:
    return ricci_tensor(p, g).scalar
