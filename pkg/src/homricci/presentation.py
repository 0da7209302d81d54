"""Reductive presentations ``g = h ⊕ m`` and invariant metrics on ``m``.

Vectors of ``m`` are handled in coordinates of a fixed background-orthonormal
basis of ``m`` (the "m-coordinates").  A metric is a symmetric positive
definite matrix ``P`` in those coordinates, ``g(x, y) = x^T P y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import (
    IDEAL_TOL,
    LieAlgebra,
    Subspace,
    bracket,
    is_ideal,
    is_subalgebra,
    killing_form,
    null_space,
    unimodularity_defect,
)

SKEW_TOL = 1e-9


class PresentationError(ValueError):
    """Invalid homogeneous presentation.

    ``kernel`` is set when the presentation fails almost-effectiveness.
    """

    def __init__(self, message, kernel: Subspace | None = None):
        super().__init__(message)
        self.kernel = kernel


class MetricError(ValueError):
    """Metric operator is not symmetric positive definite."""


def effectiveness_kernel(algebra: LieAlgebra, isotropy: Subspace) -> Subspace:
    """Largest ideal of ``algebra`` contained in ``isotropy``.

    Iterates ``S <- {X in S : [g, X] ⊂ S}`` starting from ``S = h``.
    """
    n = algebra.dim
    s = Subspace.span(n, isotropy.basis)
    ads = algebra.ad_matrices()
    while s.dim:
        q = s.orthonormal()
        out = np.eye(n) - q.T @ q
        # coefficients a with (1 - Pi_S) ad(e_i) q^T a = 0 for every i
        lin = np.einsum("kl,ilj,aj->ika", out, ads, q).reshape(-1, s.dim)
        coeffs = null_space(lin)
        if coeffs.shape[1] == s.dim:
            break
        s = Subspace.span(n, coeffs.T @ q)
    return s


def _g_orthonormal_complement(h_cols: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """Background-orthonormal basis (columns) of the orthogonal complement of h.

    Built by Gram-Schmidt on the projected coordinate vectors in order, so that
    coordinate-aligned isotropy leaves the remaining axes untouched.
    """
    n = gram.shape[0]
    d = n - h_cols.shape[1]
    if h_cols.shape[1]:
        hg = h_cols.T @ gram @ h_cols
        proj = np.eye(n) - h_cols @ np.linalg.solve(hg, h_cols.T @ gram)
    else:
        proj = np.eye(n)
    cols = []
    for i in range(n):
        if len(cols) == d:
            break
        v = proj[:, i].copy()
        for _ in range(2):
            for u in cols:
                v -= (u @ gram @ v) * u
        nv = np.sqrt(v @ gram @ v)
        if nv > 1e-8 * np.sqrt(gram[i, i]):
            cols.append(v / nv)
    if len(cols) != d:
        raise PresentationError("could not build a complement of the isotropy")
    return np.array(cols).T.reshape(n, d)


class Presentation:
    """Homogeneous presentation with an invariant background inner product.

    Use :func:`make_presentation` to construct validated instances.
    """

    def __init__(self, algebra: LieAlgebra, isotropy: Subspace, background: np.ndarray,
                 name: str | None = None):
        self.algebra = algebra
        self.isotropy = isotropy
        self.background = background
        self.name = name
        gram = background
        n = algebra.dim
        if isotropy.dim:
            h = isotropy.basis.T
            # background-orthonormal h basis
            w, v = np.linalg.eigh(h.T @ gram @ h)
            self.h_basis = h @ v / np.sqrt(w)
        else:
            self.h_basis = np.zeros((n, 0))
        self.m_basis = _g_orthonormal_complement(self.h_basis, gram)
        self.complement = Subspace(n, self.m_basis.T)

    @property
    def dim_m(self) -> int:
        return self.m_basis.shape[1]

    @property
    def dim_h(self) -> int:
        return self.h_basis.shape[1]

    def to_ambient(self, x) -> np.ndarray:
        """m-coordinates -> vector of g."""
        return np.asarray(x, dtype=float) @ self.m_basis.T

    def to_m(self, v) -> np.ndarray:
        """Vector of g -> m-coordinates of its m-component."""
        return np.asarray(v, dtype=float) @ (self.background @ self.m_basis)

    @cached_property
    def bracket_m_tensor(self) -> np.ndarray:
        """``T[a, b, c]``: m-coordinate ``c`` of ``[m_a, m_b]_m``."""
        mb = self.m_basis
        br = np.einsum("ia,jb,ijk->abk", mb, mb, self.algebra.structure)
        return self.to_m(br)

    @cached_property
    def bracket_h_tensor(self) -> np.ndarray:
        """``[m_a, m_b]_h`` as ambient vectors, shape (d, d, n)."""
        mb = self.m_basis
        br = np.einsum("ia,jb,ijk->abk", mb, mb, self.algebra.structure)
        return br - self.to_ambient(self.to_m(br))

    @cached_property
    def isotropy_rep(self) -> np.ndarray:
        """``ad(Z)|_m`` in m-coordinates for each background-orthonormal ``Z`` of h."""
        ads = np.einsum("kz,kij->zij", self.h_basis, self.algebra.ad_matrices())
        return np.einsum("ia,zij,jb->zab", self.background @ self.m_basis, ads, self.m_basis)

    @cached_property
    def killing_m(self) -> np.ndarray:
        mb = self.m_basis
        return mb.T @ killing_form(self.algebra) @ mb

    @cached_property
    def trace_form_m(self) -> np.ndarray:
        """``tr(ad_{m_a})`` for the m basis vectors."""
        return self.m_basis.T @ unimodularity_defect(self.algebra)

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return (f"Presentation({label}dim g={self.algebra.dim}, dim h={self.dim_h}, "
                f"dim m={self.dim_m})")


@dataclass(frozen=True)
class PresentationReport:
    subalgebra_residual: float
    reductivity_residual: float
    skew_defect: float
    kernel: Subspace

    @property
    def ok(self) -> bool:
        return (self.subalgebra_residual <= IDEAL_TOL
                and self.reductivity_residual <= IDEAL_TOL
                and self.skew_defect <= SKEW_TOL
                and self.kernel.dim == 0)


def check_presentation(p: Presentation) -> PresentationReport:
    a = p.algebra
    sub = is_subalgebra(a, p.isotropy)
    red = 0.0
    skew = 0.0
    if p.dim_h and p.dim_m:
        hb, mb, gram = p.h_basis, p.m_basis, p.background
        hm = np.einsum("iz,ja,ijk->zak", hb, mb, a.structure)
        red = float(np.abs(hm - p.to_ambient(p.to_m(hm))).max())
        ads = np.einsum("kz,kij->zij", hb, a.ad_matrices())
        sk = np.einsum("ia,ij,zjk,kb->zab", mb, gram, ads, mb)
        skew = float(np.abs(sk + sk.transpose(0, 2, 1)).max())
    kern = effectiveness_kernel(a, p.isotropy) if sub <= IDEAL_TOL else Subspace.zero(a.dim)
    return PresentationReport(sub, red, skew, kern)


def make_presentation(algebra: LieAlgebra, isotropy: Subspace | None = None, background=None,
                      name: str | None = None) -> Presentation:
    """Validated presentation with ``m`` the background-orthogonal complement of ``h``."""
    n = algebra.dim
    if isotropy is None:
        isotropy = Subspace.zero(n)
    if isotropy.ambient_dim != n:
        raise PresentationError("isotropy lives in a space of the wrong dimension")
    if background is None or (isinstance(background, str) and background == "identity"):
        gram = np.eye(n)
    else:
        gram = np.asarray(background, dtype=float)
    if gram.shape != (n, n) or np.abs(gram - gram.T).max() > 1e-12 * max(1.0, np.abs(gram).max()):
        raise PresentationError("background must be a symmetric n x n matrix")
    gram = 0.5 * (gram + gram.T)
    if np.linalg.eigvalsh(gram)[0] <= 0:
        raise PresentationError("background is not positive definite")
    gram.setflags(write=False)
    sub = is_subalgebra(algebra, isotropy)
    if sub > IDEAL_TOL:
        raise PresentationError(f"isotropy is not a subalgebra (residual {sub:.3e})")
    p = Presentation(algebra, isotropy, gram, name=name)
    rep = check_presentation(p)
    if rep.skew_defect > SKEW_TOL:
        raise PresentationError(f"background not invariant: skewness defect {rep.skew_defect:.3e}")
    if rep.reductivity_residual > IDEAL_TOL:
        raise PresentationError(f"complement is not ad(h)-invariant "
                                f"(residual {rep.reductivity_residual:.3e})")
    if rep.kernel.dim:
        raise PresentationError(
            f"presentation not almost-effective: isotropy contains a {rep.kernel.dim}-dimensional "
            f"ideal", kernel=rep.kernel)
    return p


def project_m(p: Presentation, v) -> np.ndarray:
    """m-component of a vector of g, along the decomposition h ⊕ m."""
    return p.to_ambient(p.to_m(v))


def project_h(p: Presentation, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v - project_m(p, v)


def bracket_m(p: Presentation, x, y) -> np.ndarray:
    """``[x, y]_m`` for x, y given in m-coordinates; result in m-coordinates."""
    return p.to_m(bracket(p.algebra, p.to_ambient(x), p.to_ambient(y)))


@dataclass(frozen=True)
class Metric:
    """Invariant metric ``g(x, y) = <P x, y>`` on m."""

    operator: np.ndarray

    def __post_init__(self):
        P = np.array(self.operator, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise MetricError("metric operator must be square")
        if np.abs(P - P.T).max() > 1e-10 * max(1.0, np.abs(P).max()):
            raise MetricError("metric operator is not symmetric")
        P = 0.5 * (P + P.T)
        if P.size and np.linalg.eigvalsh(P)[0] <= 0:
            raise MetricError("metric operator is not positive definite")
        P.setflags(write=False)
        object.__setattr__(self, "operator", P)

    @classmethod
    def identity(cls, p: Presentation) -> "Metric":
        return cls(np.eye(p.dim_m))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.operator)


def as_operator(g) -> np.ndarray:
    return g.operator if isinstance(g, Metric) else np.asarray(g, dtype=float)


def equivariance_defect(p: Presentation, g) -> float:
    """``max_Z ||[ad(Z)|_m, P]||``; zero for Ad(H)-invariant metrics."""
    P = as_operator(g)
    if not p.dim_h:
        return 0.0
    rep = p.isotropy_rep
    comm = rep @ P - P @ rep
    return float(np.abs(comm).max())


def orthonormal_frame(p: Presentation, g) -> np.ndarray:
    """Rows form a g-orthonormal frame of m: ``P^{-1/2}`` applied to the background frame."""
    P = as_operator(g)
    if P.shape != (p.dim_m, p.dim_m):
        raise MetricError(f"metric must be {p.dim_m} x {p.dim_m}")
    w, v = np.linalg.eigh(P)
    if w[0] <= 0:
        raise MetricError("metric degenerate: operator is not positive definite")
    return (v / np.sqrt(w)) @ v.T


def invariant_commutant(p: Presentation) -> np.ndarray:
    """Frobenius-orthonormal basis of symmetric matrices commuting with ad(h)|_m.

    Shape (k, d, d).
    """
    d = p.dim_m
    iu = np.triu_indices(d)
    sym = []
    for a, b in zip(*iu):
        e = np.zeros((d, d))
        e[a, b] = e[b, a] = 1.0
        sym.append(e / np.linalg.norm(e))
    sym = np.array(sym)
    if not p.dim_h:
        return sym
    rep = p.isotropy_rep
    lin = np.einsum("zab,sbc->zsac", rep, sym) - np.einsum("sab,zbc->zsac", sym, rep)
    lin = lin.transpose(0, 2, 3, 1).reshape(-1, len(sym))
    coeffs = null_space(lin)
    return np.einsum("sk,sab->kab", coeffs, sym)
