import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homricci import catalog
from homricci.algebra import (
    LieAlgebra,
    LieAlgebraError,
    Subspace,
    bracket,
    derived_subalgebra,
    direct_sum,
    intersect,
    is_compact_semisimple,
    is_ideal,
    is_subalgebra,
    jacobi_residual,
    killing_form,
    restrict,
    semidirect_sum,
    unimodularity_defect,
)


def brute_killing(a):
    # trace(ad_x ad_y) from explicit ad matrices built entry by entry
    n = a.dim
    c = a.structure
    ads = []
    for i in range(n):
        m = np.zeros((n, n))
        for j in range(n):
            for k in range(n):
                m[k, j] = c[i, j, k]
        ads.append(m)
    return np.array([[np.trace(ads[i] @ ads[j]) for j in range(n)] for i in range(n)])


def e(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v


def test_su2_bracket_cyclic():
    a = catalog.su2()
    np.testing.assert_array_equal(bracket(a, e(3, 0), e(3, 1)), e(3, 2))
    np.testing.assert_array_equal(bracket(a, e(3, 1), e(3, 2)), e(3, 0))
    np.testing.assert_array_equal(bracket(a, e(3, 2), e(3, 0)), e(3, 1))


def test_heisenberg_center():
    a = catalog.heisenberg()
    assert not np.any(bracket(a, e(3, 0), e(3, 2)))
    assert not np.any(bracket(a, e(3, 1), e(3, 2)))


def test_bracket_dimension_mismatch():
    with pytest.raises(ValueError):
        bracket(catalog.su2(), np.ones(2), np.ones(3))


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["su2_r", "so3_sl2r", "su2_semidirect_r3", "heisenberg"]),
       st.integers(0, 2**32 - 1))
def test_bracket_bilinear_antisymmetric(name, seed):
    a = catalog.get(name).presentation.algebra
    rng = np.random.default_rng(seed)
    x, y, z = rng.standard_normal((3, a.dim))
    s = rng.standard_normal()
    assert np.allclose(bracket(a, x, x), 0, atol=1e-12)
    assert np.allclose(bracket(a, x, y), -bracket(a, y, x), atol=1e-12)
    assert np.allclose(bracket(a, x + s * z, y), bracket(a, x, y) + s * bracket(a, z, y), atol=1e-10)


def test_jacobi_residual_exact_algebras():
    assert jacobi_residual(catalog.su2()) == 0.0
    assert jacobi_residual(catalog.abelian(3)) == 0.0


def perturbed_su2():
    # [e1, e2] = e3 + 0.1 e1
    c = catalog.su2().structure.copy()
    c[0, 1, 0] += 0.1
    c[1, 0, 0] -= 0.1
    return c


def test_jacobi_residual_detects_perturbation():
    c = perturbed_su2()
    bad = LieAlgebra(c, check=False)
    assert jacobi_residual(bad) == pytest.approx(0.1)
    with pytest.raises(LieAlgebraError):
        LieAlgebra(c)


def test_cyclic_rescaling_keeps_jacobi():
    # every bracket [e1,e2]=a e3, [e2,e3]=b e1, [e3,e1]=c e2 is a Lie algebra
    c = catalog.su2().structure.copy()
    c[0, 1, 2] += 0.1
    c[1, 0, 2] -= 0.1
    assert jacobi_residual(LieAlgebra(c)) == 0.0


def test_jacobi_residual_matches_explicit_sum():
    c = perturbed_su2()
    n = 3
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = sum(c[i, j, m] * c[m, k, l] + c[j, k, m] * c[m, i, l]
                            + c[k, i, m] * c[m, j, l] for m in range(n))
                    worst = max(worst, abs(s))
    assert jacobi_residual(LieAlgebra(c, check=False)) == pytest.approx(worst, rel=1e-12)


def test_all_catalog_jacobi_zero():
    for name in catalog.names():
        assert jacobi_residual(catalog.get(name).presentation.algebra) == 0.0, name


def test_killing_su2():
    np.testing.assert_allclose(killing_form(catalog.su2()), -2 * np.eye(3), atol=1e-14)


@pytest.mark.parametrize("alg", [catalog.abelian(4), catalog.heisenberg()])
def test_killing_zero(alg):
    assert not np.any(killing_form(alg))


@pytest.mark.parametrize("name", ["so3_sl2r", "su2_semidirect_r3", "e2_nonflat", "su2_su2_r_diag"])
def test_killing_matches_brute_force(name):
    a = catalog.get(name).presentation.algebra
    b = killing_form(a)
    np.testing.assert_allclose(b, brute_killing(a), atol=1e-12)
    np.testing.assert_array_equal(b, b.T)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["su2_r", "so3_sl2r", "su2_semidirect_r3"]), st.integers(0, 2**32 - 1))
def test_killing_transforms_as_bilinear_form(name, seed):
    a = catalog.get(name).presentation.algebra
    rng = np.random.default_rng(seed)
    q1, _ = np.linalg.qr(rng.standard_normal((a.dim, a.dim)))
    q2, _ = np.linalg.qr(rng.standard_normal((a.dim, a.dim)))
    t = q1 @ np.diag(np.linspace(1.0, 10.0, a.dim)) @ q2  # condition number 10
    b = killing_form(a)
    b2 = killing_form(a.change_basis(t))
    # new basis vector f_a has old coordinates t[:, a]
    np.testing.assert_allclose(b2, t.T @ b @ t, atol=1e-9 * (1 + np.abs(b2).max()))


def test_ideal_restriction_killing():
    for name in ["su2_r", "so3_e2", "su2_su2_r_diag"]:
        entry = catalog.get(name)
        a, k = entry.presentation.algebra, entry.compact_ideal
        assert is_ideal(a, k) <= 1e-9
        q = k.orthonormal()
        # restrict expresses the algebra in the orthonormalized basis of k
        ambient = q @ killing_form(a) @ q.T
        np.testing.assert_allclose(killing_form(restrict(a, k)), ambient, atol=1e-10)


def test_is_ideal_examples():
    a = direct_sum(catalog.su2(), catalog.abelian(1))
    assert is_ideal(a, Subspace.coordinates(4, [0, 1, 2])) == 0.0
    s = catalog.su2()
    assert is_ideal(s, Subspace.coordinates(3, [0])) == pytest.approx(1.0)
    assert is_ideal(s, Subspace.whole(3)) == 0.0


def test_is_subalgebra_examples():
    a = direct_sum(catalog.su2(), catalog.su2())
    diag = Subspace.span(6, np.hstack([np.eye(3), np.eye(3)]))
    assert is_subalgebra(a, diag) <= 1e-12
    h = catalog.heisenberg()
    assert is_subalgebra(h, Subspace.coordinates(3, [0, 1])) > 0.5
    assert is_subalgebra(h, Subspace.zero(3)) == 0.0


def test_compact_semisimple_certificates():
    a = direct_sum(catalog.su2(), catalog.abelian(1))
    cert = is_compact_semisimple(a, Subspace.coordinates(4, [0, 1, 2]))
    assert cert
    np.testing.assert_allclose(np.sort(cert.eigenvalues), [-2, -2, -2], atol=1e-12)
    assert not is_compact_semisimple(catalog.heisenberg(), Subspace.whole(3))
    b = catalog.get("so3_sl2r").presentation.algebra
    cert = is_compact_semisimple(b, Subspace.coordinates(6, [3, 4, 5]))
    assert not cert
    assert cert.eigenvalues.min() < 0 < cert.eigenvalues.max()
    assert not is_compact_semisimple(catalog.sl2r(), Subspace.whole(3))


def test_compact_semisimple_rejects_abelian_subalgebra_of_su2():
    # so(2) inside su(2): ambient B is negative there, but so(2) is abelian
    assert not is_compact_semisimple(catalog.su2(), Subspace.coordinates(3, [2]))


def test_compact_semisimple_su2_blocks():
    a = direct_sum(catalog.su2(), catalog.su2())
    assert is_compact_semisimple(a, Subspace.whole(6))
    assert is_compact_semisimple(a, Subspace.coordinates(6, [3, 4, 5]))


def test_derived_subalgebra_examples():
    assert derived_subalgebra(catalog.su2(), Subspace.whole(3)) == Subspace.whole(3)
    h = catalog.heisenberg()
    assert derived_subalgebra(h, Subspace.whole(3)) == Subspace.coordinates(3, [2])
    assert derived_subalgebra(catalog.abelian(3), Subspace.whole(3)).dim == 0


@pytest.mark.parametrize("name", ["su2_r", "su2_semidirect_r3", "heisenberg", "so3_e2", "e2"])
def test_derived_of_ideal_is_ideal(name):
    a = catalog.get(name).presentation.algebra
    d = derived_subalgebra(a, Subspace.whole(a.dim))
    assert is_ideal(a, d) <= 1e-9
    assert is_ideal(a, derived_subalgebra(a, d)) <= 1e-9


def test_direct_sum_su2_r():
    a = direct_sum(catalog.su2(), catalog.abelian(1))
    assert a.dim == 4
    assert is_ideal(a, Subspace.coordinates(4, [0, 1, 2])) == 0.0
    assert len(set(a.labels)) == 4


def test_semidirect_gives_e2():
    rot = np.array([[[0.0, -1.0], [1.0, 0.0]]])
    a = semidirect_sum(catalog.so2(), rot, 2)
    assert a.dim == 3
    assert jacobi_residual(a) == 0.0
    # [r, t1] = t2, [r, t2] = -t1, [t1, t2] = 0
    np.testing.assert_array_equal(bracket(a, e(3, 0), e(3, 1)), e(3, 2))
    np.testing.assert_array_equal(bracket(a, e(3, 0), e(3, 2)), -e(3, 1))
    assert not np.any(bracket(a, e(3, 1), e(3, 2)))
    np.testing.assert_array_equal(a.structure, catalog.e2().structure)


def test_semidirect_su2_r3():
    s = catalog.su2()
    a = semidirect_sum(s, s.ad_matrices(), 3)
    assert a.dim == 6
    assert jacobi_residual(a) == 0.0
    assert is_ideal(a, Subspace.coordinates(6, [3, 4, 5])) == 0.0
    assert is_ideal(a, Subspace.coordinates(6, [0, 1, 2])) > 0.5


def test_semidirect_rejects_non_representation():
    s = catalog.su2()
    bad = np.array([np.eye(3), np.zeros((3, 3)), np.zeros((3, 3))])
    with pytest.raises(LieAlgebraError):
        semidirect_sum(s, bad, 3)


def test_unimodularity_defect():
    assert not np.any(unimodularity_defect(catalog.su2()))
    assert not np.any(unimodularity_defect(catalog.heisenberg()))
    np.testing.assert_array_equal(unimodularity_defect(catalog.solvable_2d()), [1.0, 0.0])


def test_subspace_rejects_dependent_rows():
    with pytest.raises(ValueError):
        Subspace(3, np.array([[1.0, 0, 0], [2.0, 0, 0]]))


def test_intersect():
    a = Subspace.coordinates(4, [0, 1, 2])
    b = Subspace.span(4, [[0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]])
    c = intersect(a, b)
    assert c == Subspace.span(4, [[0, 0, 1, 0], [1, 1, 0, 0]])
