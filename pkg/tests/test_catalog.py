import numpy as np
import pytest

from homricci import catalog
from homricci.algebra import Subspace, is_compact_semisimple, jacobi_residual
from homricci.bochner import HypothesisError, reduce_to_semisimple
from homricci.catalog import Expected
from homricci.presentation import check_presentation, equivariance_defect

DIMS = {  # (dim g, dim h)
    "su2": (3, 0), "su2_r": (4, 0), "su2_r2_so2": (5, 1), "so3_e2": (6, 2),
    "so3_sl2r": (6, 2), "su2_su2_r_diag": (7, 3), "su2_semidirect_r3": (6, 1),
    "heisenberg": (3, 0), "e2": (3, 0), "e2_nonflat": (3, 0), "sl2r": (3, 0), "abelian_3": (3, 0),
}


def test_names_cover_catalog():
    assert sorted(catalog.names()) == sorted(DIMS)


@pytest.mark.parametrize("name", sorted(DIMS))
def test_entry_dimensions(name):
    p = catalog.get(name).presentation
    assert (p.algebra.dim, p.dim_h) == DIMS[name]
    assert p.dim_m == DIMS[name][0] - DIMS[name][1]


@pytest.mark.parametrize("name", catalog.names())
def test_entries_valid(name):
    entry = catalog.get(name)
    assert jacobi_residual(entry.presentation.algebra) == 0.0
    rep = check_presentation(entry.presentation)
    assert rep.ok and rep.kernel.dim == 0
    if entry.compact_ideal is not None:
        assert is_compact_semisimple(entry.presentation.algebra, entry.compact_ideal)


def test_su2_r_compact_ideal():
    k = catalog.get("su2_r").compact_ideal
    assert k.dim == 3
    assert is_compact_semisimple(catalog.get("su2_r").presentation.algebra, k)


def test_so3_e2_dimensions():
    p = catalog.get("so3_e2").presentation
    assert (p.algebra.dim, p.dim_h, p.dim_m) == (6, 2, 4)


def test_expected_categories():
    for name in catalog.names():
        entry = catalog.get(name)
        if entry.expected is Expected.FINITE_EXTINCTION:
            assert entry.compact_ideal is not None, name
        else:
            assert entry.compact_ideal is None, name


@pytest.mark.parametrize("name", ["heisenberg", "e2", "e2_nonflat", "sl2r", "su2_semidirect_r3"])
def test_no_compact_ideal_among_candidates(name):
    p = catalog.get(name).presentation
    with pytest.raises(HypothesisError):
        reduce_to_semisimple(p, Subspace.whole(p.algebra.dim))


def test_abelian_on_the_fly():
    entry = catalog.get("abelian_5")
    assert entry.presentation.dim_m == 5
    assert entry.expected is Expected.FLAT_FIXED_POINT


def test_unknown_entry():
    with pytest.raises(KeyError, match="unknown catalog entry"):
        catalog.get("su3")


def test_random_metric_su2_r_seed_7():
    g = catalog.random_metric(catalog.get("su2_r"), 7)
    assert np.all(np.linalg.eigvalsh(g.operator) > 0)
    assert equivariance_defect(catalog.get("su2_r").presentation, g) == 0.0


@pytest.mark.parametrize("name", catalog.names())
def test_random_metric_equivariant_and_clamped(name):
    p = catalog.get(name).presentation
    for seed in range(10):
        g = catalog.random_metric(p, seed)
        w = np.linalg.eigvalsh(g.operator)
        assert w[0] >= 0.1 - 1e-12 and w[-1] <= 10 + 1e-12
        assert equivariance_defect(p, g) <= 1e-9


def test_random_metric_reproducible():
    a = catalog.random_metric(catalog.get("so3_sl2r"), 12)
    b = catalog.random_metric(catalog.get("so3_sl2r"), 12)
    np.testing.assert_array_equal(a.operator, b.operator)
    c = catalog.random_metric(catalog.get("so3_sl2r"), 13)
    assert not np.array_equal(a.operator, c.operator)


def test_product_entries_block_diagonal_metrics():
    # S^2 x R^2 entries: invariant metrics split into the sphere and plane blocks
    for name in ("su2_r2_so2", "so3_e2", "so3_sl2r"):
        g = catalog.random_metric(catalog.get(name), 1).operator
        np.testing.assert_allclose(g[:2, 2:], 0, atol=1e-12)
        assert g[0, 0] == pytest.approx(g[1, 1]) and abs(g[0, 1]) < 1e-12
