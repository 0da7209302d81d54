"""Built-in algebras and presentations used as fixtures throughout the package.

Basis conventions:

* ``su2`` (= ``so3``): cyclic basis ``[e1, e2] = e3, [e2, e3] = e1, [e3, e1] = e2``;
  Killing form ``-2 I``, background ``-B/2 = I``.
* ``so(2)`` inside ``su2`` is always the ``e3`` axis.
* ``sl2r``: ``u0`` compact, ``[u0, u1] = u2, [u0, u2] = -u1, [u1, u2] = -u0``.
* ``e2``: ``r`` rotation, ``[r, t1] = t2, [r, t2] = -t1``.

Every background is the identity in these bases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import LieAlgebra, Subspace, direct_sum, semidirect_sum
from .presentation import Metric, Presentation, invariant_commutant, make_presentation


class Expected(enum.Enum):
    FINITE_EXTINCTION = "FiniteExtinction"
    IMMORTAL_DIAGNOSTIC = "ImmortalDiagnostic"
    FLAT_FIXED_POINT = "FlatFixedPoint"
    # no compact semisimple ideal: the extinction criterion says nothing
    OUTSIDE_HYPOTHESIS = "OutsideHypothesis"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    presentation: Presentation
    compact_ideal: Subspace | None
    expected: Expected
    notes: str = ""


def su2(labels=("e1", "e2", "e3")) -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)],
                                    labels=labels)


def so3() -> LieAlgebra:
    return su2(labels=("x1", "x2", "x3"))


def heisenberg() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(0, 1, 2, 1.0)], labels=("x", "y", "z"))


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(np.zeros((n, n, n)), labels=[f"a{i + 1}" for i in range(n)])


def so2() -> LieAlgebra:
    return LieAlgebra(np.zeros((1, 1, 1)), labels=("r",))


def e2(stretch: float = 1.0) -> LieAlgebra:
    """``so(2) ⋉ R^2``; ``stretch != 1`` gives the same algebra in a basis
    whose identity metric is not flat."""
    rot = np.array([[[0.0, -1.0], [stretch, 0.0]]])
    out = semidirect_sum(so2(), rot, 2)
    return LieAlgebra(out.structure, labels=("r", "t1", "t2"))


def sl2r() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(0, 1, 2, 1.0), (0, 2, 1, -1.0), (1, 2, 0, -1.0)],
                                    labels=("u0", "u1", "u2"))


def solvable_2d() -> LieAlgebra:
    """Non-unimodular ``[e1, e2] = e2``."""
    return LieAlgebra.from_brackets(2, [(0, 1, 1, 1.0)])


def su2_semidirect_r3() -> LieAlgebra:
    """``su(2) ⋉ R^3`` for the standard (vector) representation."""
    s = su2()
    return semidirect_sum(s, s.ad_matrices(), 3)


def _entry(name, algebra, isotropy_idx, ideal_idx, expected, notes):
    n = algebra.dim
    iso = _iso(n, isotropy_idx)
    p = make_presentation(algebra, iso, np.eye(n), name=name)
    ideal = Subspace.coordinates(n, ideal_idx) if ideal_idx is not None else None
    return CatalogEntry(name, p, ideal, expected, notes)


def _iso(n, idx):
    if idx is None:
        return Subspace.zero(n)
    if isinstance(idx, np.ndarray):
        return Subspace(n, idx)
    return Subspace.coordinates(n, idx)


def _diag_su2(n):
    rows = np.zeros((3, n))
    for i in range(3):
        rows[i, i] = rows[i, i + 3] = 1.0
    return rows


FE, IM, FLAT = Expected.FINITE_EXTINCTION, Expected.IMMORTAL_DIAGNOSTIC, Expected.FLAT_FIXED_POINT

_BUILDERS = {
    "su2": lambda: _entry("su2", su2(), None, [0, 1, 2], FE, "S^3; compact, bi-invariant at the identity"),
    "su2_r": lambda: _entry(
        "su2_r", direct_sum(su2(), abelian(1)), None, [0, 1, 2], FE,
        "SU(2) x R, S^3 x R; all left-invariant metrics, including non-products"),
    "su2_r2_so2": lambda: _entry(
        "su2_r2_so2", direct_sum(su2(), abelian(2)), [2], [0, 1, 2], FE,
        "SU(2) x R^2 over SO(2) x {e}; S^2 x R^2"),
    "so3_e2": lambda: _entry(
        "so3_e2", direct_sum(so3(), e2()), [2, 3], [0, 1, 2], FE,
        "so(3) + e(2) over so(2) + so(2); S^2 x E^2"),
    "so3_sl2r": lambda: _entry(
        "so3_sl2r", direct_sum(so3(), sl2r()), [2, 3], [0, 1, 2], FE,
        "so(3) + sl(2,R) over so(2) + so(2); S^2 x H^2"),
    "su2_su2_r_diag": lambda: _entry(
        "su2_su2_r_diag", direct_sum(su2(), su2(), abelian(1)), _diag_su2(7), list(range(6)), FE,
        "su(2) + su(2) + R over the diagonal su(2); S^3 x R"),
    "su2_semidirect_r3": lambda: _entry(
        "su2_semidirect_r3", su2_semidirect_r3(), [2], None, Expected.OUTSIDE_HYPOTHESIS,
        "su(2) ⋉ R^3 over so(2); S^2 x R^3. No compact semisimple ideal: the "
        "extinction criterion does not apply, though the product metric still goes extinct"),
    "heisenberg": lambda: _entry("heisenberg", heisenberg(), None, None, IM, "Nil; R^3"),
    "e2": lambda: _entry("e2", e2(), None, None, IM, "E(2); identity metric is flat"),
    "e2_nonflat": lambda: _entry(
        "e2_nonflat", e2(stretch=2.0), None, None, IM, "E(2) with a non-flat identity metric"),
    "sl2r": lambda: _entry("sl2r", sl2r(), None, None, IM, "universal cover of SL(2,R); R^3"),
    "abelian_3": lambda: _entry("abelian_3", abelian(3), None, None, FLAT, "flat R^3"),
}


def names() -> list[str]:
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get(name: str) -> CatalogEntry:
    if name.startswith("abelian_") and name not in _BUILDERS:
        n = int(name.split("_", 1)[1])
        return _entry(name, abelian(n), None, None, FLAT, f"flat R^{n}")
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(names())}") from None


def random_metric(entry: CatalogEntry | Presentation, seed: int, scale: float = 1.0) -> Metric:
    """Random Ad(H)-invariant metric.

    ``exp`` of a Gaussian symmetric matrix projected onto the commutant of the
    isotropy representation, eigenvalues clamped to ``[0.1, 10]``.  Draws come
    from ``numpy.random.default_rng(seed)`` (PCG64).
    """
    p = entry.presentation if isinstance(entry, CatalogEntry) else entry
    rng = np.random.default_rng(seed)
    d = p.dim_m
    a = rng.standard_normal((d, d)) * scale
    x = 0.5 * (a + a.T)
    basis = invariant_commutant(p)
    s = np.einsum("k,kab->ab", np.einsum("kab,ab->k", basis, x), basis)
    w, v = np.linalg.eigh(0.5 * (s + s.T))
    w = np.clip(np.exp(w), 0.1, 10.0)
    return Metric((v * w) @ v.T)
