from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import as_float, factor, product, random_rationals
from oracles import FloatHermitian
from sasprod.errors import ValidationError
from sasprod.forms import ExteriorForm, power, wedge, wedge_all
from sasprod.hermitian_classes import (
    algebraic_criteria,
    certificate_constant,
    classify,
    d_c,
    dd_c,
    exterior_derivative,
    j_on_forms,
    k_gauduchon_form,
    k_gauduchon_prediction,
    lee_form,
    lee_form_closed_form,
    matsuo_expression,
)
from sasprod.product_hermitian import build_product
from sasprod.scalars import vanishes

F = Fraction


def test_J_on_first_contact_form():
    a, b = F(-2, 3), F(3, 4)
    p = product("su2", "h3", a, b)
    expected = p.eta1_form.scale(a / b) + p.eta2_form.scale((a * a + b * b) / b)
    assert j_on_forms(p, p.eta1_form).equals(expected)


def test_J_fixes_fundamental_forms():
    p = product("sl2r", "h5", F(1, 2), F(-3))
    assert j_on_forms(p, p.Phi1).equals(p.Phi1)
    assert j_on_forms(p, p.Phi2).equals(p.Phi2)
    assert j_on_forms(p, p.omega).equals(p.omega)


def test_J_on_functions_is_identity():
    p = product("su2", "su2", F(0), F(1))
    c = ExteriorForm.constant(F(7, 2), p.dim)
    assert j_on_forms(p, c) == c


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_J_twice_is_sign_on_degree(degree):
    p = product("h3", "sl2r", F(1, 3), F(2))
    keys = combinations(range(p.dim), degree)
    alpha = ExteriorForm(degree, p.dim, {key: F(sum(key) + 1, len(key) + 1) for key in keys})
    assert j_on_forms(p, j_on_forms(p, alpha)).equals(alpha.scale((-1) ** degree))


@pytest.mark.parametrize("a, b", [(F(-1), F(1)), (F(2, 7), F(-5, 3))])
def test_dc_omega(a, b):
    p = product("h3", "su2", a, b)
    s = a * a + b * b
    expected = (
        wedge(p.Phi1, p.eta1_form + p.eta2_form.scale(a)) + wedge(p.Phi2, p.eta1_form.scale(a) + p.eta2_form.scale(s))
    ).scale(2)
    assert d_c(p, p.omega).equals(expected)


@pytest.mark.parametrize("names", [("h3", "su2"), ("sl2r", "h5"), ("su2", "su2")])
def test_ddc_omega(names):
    a, b = F(3, 5), F(-4, 7)
    p = product(*names, a, b)
    P1, P2 = p.Phi1, p.Phi2
    expected = (wedge(P1, P1) + wedge(P1, P2).scale(2 * a) + wedge(P2, P2).scale(a * a + b * b)).scale(4)
    assert dd_c(p, p.omega).equals(expected)


def test_dc_of_constant():
    p = product("su2", "h3", F(1), F(1))
    assert d_c(p, ExteriorForm.constant(F(3), p.dim)).is_zero()


@pytest.mark.parametrize("names", [("h3", "su2"), ("h5", "sl2r"), ("abelian1", "su2")])
@pytest.mark.parametrize("a, b", random_rationals(21, 3))
def test_d_omega_and_product_identity(names, a, b):
    p = product(*names, a, b)
    d_om = exterior_derivative(p, p.omega)
    expected = (wedge(p.Phi1, p.eta2_form) - wedge(p.eta1_form, p.Phi2)).scale(-2 * b)
    assert d_om.equals(expected)
    lhs = wedge(d_om, d_c(p, p.omega))
    rhs = wedge_all(dd_c(p, p.omega), p.eta1_form, p.eta2_form).scale(b)
    assert lhs.equals(rhs)


def test_lee_form_example():
    p = product("su2", "h3", F(2, 3), F(1))
    assert lee_form(p).theta.equals(p.eta1_form - p.eta2_form)


@pytest.mark.parametrize("names", [("h5", "su2"), ("abelian1", "sl2r"), ("h3", "h5")])
@pytest.mark.parametrize("a, b", random_rationals(22, 2))
def test_lee_form_closed_form_and_derivatives(names, a, b):
    p = product(*names, a, b)
    lee = lee_form(p)
    assert lee.theta.equals(lee_form_closed_form(p))
    assert vanishes(lee.nabla_bismut)
    d_theta = exterior_derivative(p, lee.theta)
    coeff = 4 * b / (p.n1 + p.n2)
    assert d_theta.equals((p.Phi1.scale(p.n2) - p.Phi2.scale(p.n1)).scale(coeff))


@pytest.mark.parametrize("names", [("h5", "su2"), ("sl2r", "h3"), ("abelian1", "su2")])
def test_lee_form_against_frame_sum(names):
    p = product(*names, F(-4, 3), F(2, 5))
    oracle = FloatHermitian(p.structure, p.metric, p.J)
    assert np.allclose(as_float(lee_form(p).covector), oracle.lee_form(), atol=1e-10)


def test_lee_form_degenerate():
    with pytest.raises(ValidationError):
        lee_form(product("abelian1", "abelian1", F(0), F(1)))


@pytest.mark.parametrize("names", [("h3", "su2"), ("abelian1", "h3"), ("h5", "sl2r"), ("su2", "abelian1")])
def test_never_balanced(names):
    assert classify(product(*names, F(1, 2), F(-1))).balanced is False


@pytest.mark.parametrize("a, b", [(F(0), F(1)), (F(-3, 2), F(2, 3))])
def test_abelian_factor_gives_vaisman(a, b):
    report = classify(product("abelian1", "su2", a, b))
    assert report.lck and report.vaisman


def test_skt_on_h3_h3():
    assert classify(product("h3", "h3", F(0), F(1))).skt
    assert not classify(product("h3", "h3", F(1), F(1))).skt


@pytest.mark.parametrize("b", [F(1), F(-2, 3), F(5)])
def test_astheno_kahler_on_h5_su2(b):
    assert classify(product("h5", "su2", F(-1, 2), b)).astheno_kahler


@pytest.mark.parametrize("a, b, expected", [(F(-2, 5), F(4, 5), True), (F(-1, 5), F(4, 5), False)])
def test_astheno_kahler_matches_matsuo_on_h3_h5(a, b, expected):
    p = product("h3", "h5", a, b)
    assert (matsuo_expression(p) == 0) is expected
    assert classify(p).astheno_kahler is expected


@pytest.mark.parametrize("names", [("h3", "su2"), ("su2", "sl2r"), ("h5", "h3"), ("abelian1", "sl2r")])
def test_always_gauduchon(names):
    p = product(*names, F(3, 4), F(-5, 6))
    report = classify(p)
    assert report.gauduchon and report.k_gauduchon[p.n - 1]


@pytest.mark.parametrize("names", [("h3", "h3"), ("abelian1", "h5")])
@pytest.mark.parametrize("a, b", random_rationals(23, 3))
def test_complex_dimension_three_is_gauduchon(names, a, b):
    p = product(*names, a, b)
    assert p.n == 3 and classify(p).gauduchon


@pytest.mark.parametrize("k", [2, 3])
def test_k_gauduchon_certificate_on_h5_su2(k):
    p = product("h5", "su2", F(1, 3), F(-2))
    lhs = k_gauduchon_form(p, k)
    assert lhs.equals(k_gauduchon_prediction(p, k))
    assert lhs.is_zero() is (k == p.n - 1)
    assert certificate_constant(p) == 1 + 2 * F(1, 3)
    report = classify(p)
    assert report.k_gauduchon[2] is False


def test_report_invariants():
    p = product("h5", "su2", F(-1, 2), F(3))
    r = classify(p)
    assert r.gauduchon == r.k_gauduchon[p.n - 1]
    assert r.astheno_kahler and r.k_gauduchon[p.n - 2]
    s = classify(product("h3", "h3", F(0), F(2)))
    assert s.skt and s.k_gauduchon[1]


@settings(max_examples=15)
@given(
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(lambda b: b != 0),
)
def test_classification_matches_algebraic_criteria(a, b):
    p = build_product(factor("h3"), factor("h5"), a, b)
    report = classify(p)
    criteria = algebraic_criteria(p)
    assert report.flags() == {k: criteria[k] for k in report.flags()}
    assert report.k_gauduchon == criteria["k_gauduchon"]


def test_omega_power_is_volume_multiple():
    p = product("su2", "sl2r", F(1), F(2))
    top = power(p.omega, p.n)
    assert len(top.coeffs) == 1 and top[tuple(range(p.dim))] != 0
