"""Real Lie algebras stored as dense structure-constant tensors.

``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.  Subspaces are
stored as row bases in ambient coordinates.  All rank decisions go through
singular values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

JACOBI_TOL = 1e-10
IDEAL_TOL = 1e-9
RANK_TOL = 1e-9
DEFINITENESS_TOL = 1e-8


class LieAlgebraError(ValueError):
    """Raised when structure constants do not define a Lie algebra."""


def _rank(s: np.ndarray) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > RANK_TOL * s[0]))


def orthonormal_rows(vectors: np.ndarray) -> np.ndarray:
    """Euclidean orthonormal basis (as rows) of the row span of ``vectors``."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.shape[0] == 0:
        return np.zeros((0, vectors.shape[1]))
    _, s, vt = np.linalg.svd(vectors, full_matrices=False)
    return vt[: _rank(s)]


def null_space(a: np.ndarray) -> np.ndarray:
    """Columns spanning the kernel of ``a``."""
    a = np.atleast_2d(a)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    return vt[_rank(s):].T


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of R^n given by ``r`` independent row vectors."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float).reshape(-1, self.ambient_dim)
        if b.shape[0]:
            s = np.linalg.svd(b, compute_uv=False)
            if s[-1] <= RANK_TOL * max(1.0, s[0]):
                raise ValueError("subspace basis vectors are linearly dependent")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, ambient_dim: int, vectors) -> "Subspace":
        """Subspace spanned by possibly dependent vectors (orthonormalized)."""
        v = np.asarray(vectors, dtype=float).reshape(-1, ambient_dim)
        return cls(ambient_dim, orthonormal_rows(v))

    @classmethod
    def coordinates(cls, ambient_dim: int, indices: Sequence[int]) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim)[list(indices)])

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((0, ambient_dim)))

    @classmethod
    def whole(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def orthonormal(self) -> np.ndarray:
        return orthonormal_rows(self.basis)

    def projector(self) -> np.ndarray:
        """Euclidean orthogonal projector onto the subspace."""
        q = self.orthonormal()
        return q.T @ q

    def contains(self, v, tol: float = IDEAL_TOL) -> bool:
        v = np.atleast_2d(np.asarray(v, dtype=float))
        return bool(np.all(np.abs(v - v @ self.projector()) <= tol))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        return bool(np.allclose(self.projector(), other.projector(), atol=1e-9))

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces of the same ambient space."""
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    qa, qb = a.orthonormal(), b.orthonormal()
    coeffs = null_space(np.vstack([qa, -qb]).T)
    return Subspace.span(a.ambient_dim, (coeffs[: qa.shape[0]].T @ qa))


class LieAlgebra:
    """Finite-dimensional real Lie algebra.

    Parameters
    ----------
    structure : array_like, shape (n, n, n)
        Structure constants.  Only entries with ``i < j`` are read; the rest is
        filled in by antisymmetry.
    labels : sequence of str, optional
    check : bool
        Validate the Jacobi identity on construction.
    """

    def __init__(self, structure, labels: Sequence[str] | None = None, check: bool = True):
        c = np.asarray(structure, dtype=float)
        n = c.shape[0]
        if c.shape != (n, n, n) or n == 0:
            raise LieAlgebraError(f"structure tensor must have shape (n, n, n), got {c.shape}")
        upper = np.triu(np.ones((n, n), dtype=bool), k=1)
        full = np.where(upper[:, :, None], c, 0.0)
        full = full - full.transpose(1, 0, 2)
        full.setflags(write=False)
        self._c = full
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(n))
        if len(self.labels) != n:
            raise LieAlgebraError("need one label per basis vector")
        if check:
            res = jacobi_residual(self)
            if res > JACOBI_TOL * (1.0 + np.abs(full).max()) ** 2:
                raise LieAlgebraError(f"Jacobi identity fails, residual {res:.3e}")

    @classmethod
    def from_brackets(cls, dim: int, brackets, labels=None, check: bool = True) -> "LieAlgebra":
        """Build from ``(i, j, k, c)`` entries meaning ``[e_i, e_j] += c e_k``."""
        c = np.zeros((dim, dim, dim))
        for i, j, k, v in brackets:
            i, j, k = int(i), int(j), int(k)
            if i == j:
                raise LieAlgebraError(f"bracket entry with i == j == {i}")
            if i < j:
                c[i, j, k] += v
            else:
                c[j, i, k] -= v
        return cls(c, labels=labels, check=check)

    @property
    def dim(self) -> int:
        return self._c.shape[0]

    @property
    def structure(self) -> np.ndarray:
        return self._c

    def brackets(self) -> list[tuple[int, int, int, float]]:
        """Nonzero ``(i, j, k, c)`` entries with ``i < j``."""
        n = self.dim
        return [
            (i, j, k, float(self._c[i, j, k]))
            for i in range(n)
            for j in range(i + 1, n)
            for k in range(n)
            if self._c[i, j, k] != 0.0
        ]

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad_x`` acting on column vectors."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), self._c)

    def ad_matrices(self) -> np.ndarray:
        """``ad_{e_i}`` for every basis vector, shape (n, n, n)."""
        return self._c.transpose(0, 2, 1)

    def change_basis(self, t) -> "LieAlgebra":
        """Algebra expressed in the basis ``f_a = sum_i t[i, a] e_i``."""
        t = np.asarray(t, dtype=float)
        tinv = np.linalg.inv(t)
        c = np.einsum("ia,jb,ijk,ck->abc", t, t, self._c, tinv)
        return LieAlgebra(c, check=False)

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, labels={list(self.labels)})"


def _check_vec(a: LieAlgebra, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != a.dim:
        raise ValueError(f"vector of length {x.shape[-1]} for algebra of dimension {a.dim}")
    return x


def bracket(a: LieAlgebra, x, y) -> np.ndarray:
    """Bilinear bracket; broadcasts over leading axes of ``x`` and ``y``."""
    x, y = _check_vec(a, x), _check_vec(a, y)
    return np.einsum("...i,...j,ijk->...k", x, y, a.structure)


def jacobi_residual(a: LieAlgebra) -> float:
    c = a.structure
    # cc[i,j,k,l] = sum_m c[i,j,m] c[m,k,l]
    cc = np.einsum("ijm,mkl->ijkl", c, c)
    total = cc + cc.transpose(1, 2, 0, 3) + cc.transpose(2, 0, 1, 3)
    return float(np.abs(total).max()) if total.size else 0.0


def killing_form(a: LieAlgebra) -> np.ndarray:
    """``B(X, Y) = tr(ad_X ad_Y)`` as a symmetric matrix."""
    c = a.structure
    b = np.einsum("ikl,jlk->ij", c, c)
    return 0.5 * (b + b.T)


def unimodularity_defect(a: LieAlgebra) -> np.ndarray:
    """Vector of ``tr(ad_{e_i})``; zero iff the algebra is unimodular."""
    return np.einsum("ikk->i", a.structure)


def _outside(sub: Subspace, v: np.ndarray) -> np.ndarray:
    return v - v @ sub.projector()


def is_ideal(a: LieAlgebra, s: Subspace) -> float:
    """Largest component of ``[e_i, s]`` outside ``s``; ~0 iff ``s`` is an ideal."""
    if s.ambient_dim != a.dim:
        raise ValueError("subspace and algebra dimensions differ")
    if s.dim == 0:
        return 0.0
    q = s.orthonormal()
    v = np.einsum("aj,ijk->iak", q, a.structure).reshape(-1, a.dim)
    return float(np.abs(_outside(s, v)).max())


def is_subalgebra(a: LieAlgebra, s: Subspace) -> float:
    """Largest component of ``[s, s]`` outside ``s``."""
    if s.ambient_dim != a.dim:
        raise ValueError("subspace and algebra dimensions differ")
    if s.dim == 0:
        return 0.0
    q = s.orthonormal()
    v = bracket(a, q[:, None, :], q[None, :, :]).reshape(-1, a.dim)
    return float(np.abs(_outside(s, v)).max())


def derived_subalgebra(a: LieAlgebra, s: Subspace) -> Subspace:
    """``span [s, s]``."""
    if s.dim == 0:
        return Subspace.zero(a.dim)
    q = s.orthonormal()
    v = bracket(a, q[:, None, :], q[None, :, :]).reshape(-1, a.dim)
    return Subspace.span(a.dim, v)


def restrict(a: LieAlgebra, s: Subspace) -> LieAlgebra:
    """The subalgebra ``s`` as an algebra in its orthonormalized basis."""
    res = is_subalgebra(a, s)
    if res > IDEAL_TOL:
        raise LieAlgebraError(f"subspace is not a subalgebra (residual {res:.3e})")
    q = s.orthonormal()
    c = np.einsum("ai,bj,ijk,ck->abc", q, q, a.structure, q)
    return LieAlgebra(c, check=False)


@dataclass(frozen=True)
class CompactCertificate:
    compact_semisimple: bool
    subalgebra_residual: float
    eigenvalues: np.ndarray
    ambient_eigenvalues: np.ndarray

    def __bool__(self):
        return self.compact_semisimple


def is_compact_semisimple(a: LieAlgebra, s: Subspace) -> CompactCertificate:
    """Certify ``s`` as a compact semisimple subalgebra.

    Uses the Killing form of ``s`` itself.  For an ideal this coincides with
    the ambient Killing form restricted to ``s``; for other subalgebras the
    ambient restriction can be negative definite on abelian pieces such as
    ``so(2)`` inside ``su(2)``, so it is only reported.
    """
    res = is_subalgebra(a, s)
    q = s.orthonormal()
    amb = np.linalg.eigvalsh(q @ killing_form(a) @ q.T) if s.dim else np.zeros(0)
    if s.dim == 0 or res > IDEAL_TOL:
        return CompactCertificate(False, res, np.zeros(0), amb)
    eig = np.linalg.eigvalsh(killing_form(restrict(a, s)))
    ok = bool(np.all(eig < -DEFINITENESS_TOL))
    return CompactCertificate(ok, res, eig, amb)


def direct_sum(*algebras: LieAlgebra) -> LieAlgebra:
    n = sum(x.dim for x in algebras)
    c = np.zeros((n, n, n))
    labels = []
    off = 0
    for x in algebras:
        d = x.dim
        c[off:off + d, off:off + d, off:off + d] = x.structure
        labels.extend(x.labels)
        off += d
    return LieAlgebra(c, labels=_unique(labels))


def _unique(labels):
    seen: dict[str, int] = {}
    out = []
    for lab in labels:
        if lab in seen:
            seen[lab] += 1
            out.append(f"{lab}_{seen[lab]}")
        else:
            seen[lab] = 0
            out.append(lab)
    return out


def semidirect_sum(
    a: LieAlgebra,
    rho: Callable[[np.ndarray], np.ndarray] | Sequence,
    m: int,
    ideal: LieAlgebra | None = None,
) -> LieAlgebra:
    """``a ⋉ V`` where ``rho(e_i)`` is an m x m derivation of ``V``.

    ``V`` is abelian unless ``ideal`` gives its bracket.  ``rho`` may be a
    callable on basis vectors or a sequence of matrices, one per basis vector.
    """
    if callable(rho):
        mats = np.array([np.asarray(rho(e), dtype=float) for e in np.eye(a.dim)])
    else:
        mats = np.asarray(rho, dtype=float)
    if mats.shape != (a.dim, m, m):
        raise LieAlgebraError(f"action must give {a.dim} matrices of shape ({m}, {m})")
    v = ideal if ideal is not None else LieAlgebra(np.zeros((m, m, m)), check=False)
    if v.dim != m:
        raise LieAlgebraError("ideal dimension does not match the representation")
    # rho must be a homomorphism into derivations of V
    for i in range(a.dim):
        d = mats[i]
        lhs = np.einsum("ijk,lk->ijl", v.structure, d)
        rhs = np.einsum("li,ljk->ijk", d, v.structure) + np.einsum("lj,ilk->ijk", d, v.structure)
        if np.abs(lhs - rhs).max() > JACOBI_TOL * (1 + np.abs(d).max()) ** 2:
            raise LieAlgebraError(f"rho(e{i + 1}) is not a derivation")
    n = a.dim + m
    c = np.zeros((n, n, n))
    c[:a.dim, :a.dim, :a.dim] = a.structure
    c[a.dim:, a.dim:, a.dim:] = v.structure
    # [x, v] = rho(x) v
    c[:a.dim, a.dim:, a.dim:] = mats.transpose(0, 2, 1)
    out = LieAlgebra(c, labels=_unique(list(a.labels) + list(v.labels)), check=False)
    res = jacobi_residual(out)
    if res > JACOBI_TOL * (1.0 + np.abs(c).max()) ** 2:
        raise LieAlgebraError(f"semidirect sum violates Jacobi, residual {res:.3e}")
    return out
