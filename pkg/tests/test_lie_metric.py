import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import as_float, factor, random_rational_metric
from oracles import FloatGeometry
from sasprod import tensors as tz
from sasprod.errors import ValidationError
from sasprod.forms import ExteriorForm, basis_covector
from sasprod.lie_metric import (
    LieAlgebra,
    MetricLieAlgebra,
    bianchi_defect,
    ce_differential,
    check_jacobi,
    direct_sum,
    metric_defect,
    torsion_tensor,
)
from sasprod.scalars import inverse, to_backend, vanishes

CATALOG = ["su2", "h3", "sl2r", "h5", "h7", "abelian1"]


def _abelian(n):
    return LieAlgebra.from_brackets(n, {})


def test_jacobi_holds_on_su2():
    assert check_jacobi(factor("su2").algebra.algebra) == (True, None)


def test_jacobi_holds_on_abelian():
    assert check_jacobi(_abelian(4)) == (True, None)


def test_jacobi_violation_reported():
    bad = LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {0: 1, 1: 1}})
    assert check_jacobi(bad) == (False, (0, 1, 2))


def test_antisymmetry_enforced():
    c = np.zeros((2, 2, 2), dtype=object)
    c[0, 1, 0] = 1
    with pytest.raises(ValidationError):
        LieAlgebra(c)


def test_d_of_contact_form_on_h3():
    alg = factor("h3").algebra.algebra
    expected = ExteriorForm(2, 3, {(0, 1): -2})
    assert ce_differential(basis_covector(2, 3), alg).equals(expected)


def test_d_of_constant_is_zero():
    alg = factor("su2").algebra.algebra
    assert ce_differential(ExteriorForm.constant(Fraction(5), 3), alg).is_zero()


def test_d_squared_on_su2():
    s = factor("su2")
    alg = s.algebra.algebra
    assert ce_differential(ce_differential(s.eta_form, alg), alg).is_zero()


def test_su2_connection_is_half_bracket():
    m = factor("su2").algebra
    assert list(tz.connection_apply(m.levi_civita, m.algebra.basis(0), m.algebra.basis(1))) == [0, 0, 1]


def test_h3_connection_on_reeb():
    m = factor("h3").algebra
    assert list(tz.connection_apply(m.levi_civita, m.algebra.basis(0), m.algebra.basis(2))) == [0, -1, 0]


def test_abelian_is_flat():
    m = MetricLieAlgebra(_abelian(3))
    assert vanishes(m.levi_civita) and vanishes(m.curvature)


def test_su2_curvature_value():
    m = factor("su2").algebra
    assert list(m.curvature[0, 1, 1]) == [1, 0, 0]


def test_h3_curvature_kills_reeb():
    m = factor("h3").algebra
    assert list(m.curvature[0, 1, 2]) == [0, 0, 0]


@pytest.mark.parametrize(
    "name, diagonal", [("su2", [2, 2, 2]), ("h3", [-2, -2, 2]), ("sl2r", [-4, -4, 2])]
)
def test_ricci_of_three_dimensional_catalog(name, diagonal):
    ric = factor(name).algebra.ricci
    assert (ric == to_backend(np.diag(diagonal), "exact")).all()


@pytest.mark.parametrize("name", CATALOG)
def test_riemannian_invariants(name):
    m = factor(name).algebra
    assert vanishes(metric_defect(m, m.levi_civita))
    assert vanishes(torsion_tensor(m, m.levi_civita))
    assert vanishes(bianchi_defect(m.curvature))
    assert vanishes(m.curvature + m.curvature.transpose(1, 0, 2, 3))
    assert vanishes(m.ricci - m.ricci.T)
    for form in m.algebra.differentials:
        assert ce_differential(form, m.algebra).is_zero()


@pytest.mark.parametrize("name", CATALOG)
def test_ricci_along_reeb(name):
    s = factor(name)
    ric_xi = s.algebra.ricci.dot(s.xi)
    assert (ric_xi == 2 * s.n * s.eta).all()


@pytest.mark.parametrize("name, seed", [("su2", 1), ("sl2r", 2), ("h5", 3)])
def test_connection_and_ricci_against_oracle_for_random_metric(name, seed):
    alg = factor(name).algebra.algebra
    g = random_rational_metric(random.Random(seed), alg.dim)
    m = MetricLieAlgebra(alg, g)
    oracle = FloatGeometry(alg.structure, g)
    for i in range(alg.dim):
        for j in range(alg.dim):
            got = tz.connection_apply(m.levi_civita, alg.basis(i), alg.basis(j))
            assert np.allclose(as_float(got), oracle.nabla(np.eye(alg.dim)[i], np.eye(alg.dim)[j]), atol=1e-10)
    assert np.allclose(as_float(m.ricci), oracle.ricci(), atol=1e-9)


def test_ricci_transforms_under_change_of_basis():
    alg = factor("sl2r").algebra.algebra
    m = MetricLieAlgebra(alg)
    p = to_backend([[1, 2, 0], [0, 1, Fraction(1, 2)], [1, 0, 3]], "exact")
    pinv_exact = inverse(p)
    # new basis f_a = sum_i p[i, a] b_i
    c_new = tz.einsum("ia,jb,ijk,ck->abc", p, p, alg.structure, pinv_exact)
    g_new = tz.einsum("ia,jb,ij->ab", p, p, m.metric)
    m_new = MetricLieAlgebra(LieAlgebra(c_new), g_new)
    assert check_jacobi(m_new.algebra)[0]
    assert (m_new.ricci == tz.einsum("ia,jb,ij->ab", p, p, m.ricci)).all()


def test_metric_validation():
    alg = factor("su2").algebra.algebra
    with pytest.raises(ValidationError):
        MetricLieAlgebra(alg, to_backend([[1, 1, 0], [0, 1, 0], [0, 0, 1]], "exact"))
    with pytest.raises(ValidationError):
        MetricLieAlgebra(alg, to_backend([[1, 2, 0], [2, 1, 0], [0, 0, 1]], "exact"))
    with pytest.raises(ValidationError):
        MetricLieAlgebra(alg, to_backend(np.eye(2, dtype=int), "exact"))


def test_direct_sum_keeps_factors_commuting():
    su2, h3 = factor("su2").algebra.algebra, factor("h3").algebra.algebra
    s = direct_sum(su2, h3)
    assert s.dim == 6 and check_jacobi(s)[0]
    assert not s.bracket(s.basis(0), s.basis(3)).any()
