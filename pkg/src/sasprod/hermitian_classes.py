"""Operator calculus on forms (J, d, d^c) and the Hermitian class tests.

Every flag is decided from its defining form identity: ``delta omega = 0``
for balanced, ``d omega = theta ^ omega`` with ``d theta = 0`` for LCK,
``dd^c omega = 0`` for SKT, and so on. The closed-form criteria in
:func:`algebraic_criteria` are kept separate so the two can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import tensors as tz
from .errors import ValidationError
from .forms import ExteriorForm, power, pullback, wedge, wedge_all
from .lie_metric import ce_differential
from .product_hermitian import ProductHermitian
from .scalars import binomial, vanishes


def j_on_forms(product: ProductHermitian, alpha: ExteriorForm) -> ExteriorForm:
    """``(J alpha)(X1, ..., Xp) = alpha(J^{-1} X1, ..., J^{-1} Xp)``; identity on 0-forms.

    With this action ``d^c omega`` is the Bismut torsion 3-form.
    """
    return pullback(alpha, -product.J)


def exterior_derivative(product: ProductHermitian, alpha: ExteriorForm) -> ExteriorForm:
    return ce_differential(alpha, product.algebra.algebra)


def d_c(product: ProductHermitian, alpha: ExteriorForm) -> ExteriorForm:
    """``d^c alpha = (-1)^p J d J alpha``."""
    out = j_on_forms(product, exterior_derivative(product, j_on_forms(product, alpha)))
    return -out if alpha.degree % 2 else out


def dd_c(product: ProductHermitian, alpha: ExteriorForm) -> ExteriorForm:
    return exterior_derivative(product, d_c(product, alpha))


def codifferential_2form(product: ProductHermitian, matrix: np.ndarray) -> np.ndarray:
    """``(delta beta)(X) = -sum_ij g^{ij} (nabla_{b_i} beta)(b_j, X)`` for a 2-form given as a matrix."""
    nabla = tz.derivative_of_covariant(product.levi_civita, matrix)
    return -tz.contract_pair(nabla, product.inverse_metric, (0, 1))


@dataclass(frozen=True, eq=False)
class LeeForm:
    theta: ExteriorForm
    covector: np.ndarray
    nabla: np.ndarray
    nabla_bismut: np.ndarray


def lee_form(product: ProductHermitian) -> LeeForm:
    """``theta = (delta omega o J) / (n - 1)`` with both covariant derivatives.

    ``nabla[u, i]`` is ``(nabla_{b_u} theta)(b_i)`` for the Levi-Civita
    connection; ``nabla_bismut`` is the same for the Bismut connection.
    """
    from .bismut import bismut_connection

    p = product
    if p.n1 + p.n2 == 0:
        raise ValidationError("the Lee form is undefined when both factors are one-dimensional")
    delta = codifferential_2form(p, p.omega_matrix)
    theta = delta.dot(p.J) / (p.n - 1)
    nabla = tz.derivative_of_covariant(p.levi_civita, theta)
    nabla_b = tz.derivative_of_covariant(bismut_connection(p), theta)
    return LeeForm(ExteriorForm.covector(theta), theta, nabla, nabla_b)


def lee_form_closed_form(product: ProductHermitian) -> ExteriorForm:
    """``(2b / (n1 + n2)) (n2 eta1 - n1 eta2)``."""
    p = product
    coeff = 2 * p.b / (p.n1 + p.n2)
    return (p.eta1_form.scale(p.n2) - p.eta2_form.scale(p.n1)).scale(coeff)


def certificate_constant(product: ProductHermitian):
    """``C = binom(n-3, n1-2) + 2a binom(n-3, n1-1) + (a^2+b^2) binom(n-3, n1)``."""
    p = product
    m = p.n - 3
    return binomial(m, p.n1 - 2) + 2 * p.a * binomial(m, p.n1 - 1) + p.params.norm2 * binomial(m, p.n1)


def matsuo_expression(product: ProductHermitian):
    """``n1(n1-1) + 2a n1 n2 + n2(n2-1)(a^2+b^2)``."""
    p = product
    return p.n1 * (p.n1 - 1) + 2 * p.a * p.n1 * p.n2 + p.n2 * (p.n2 - 1) * p.params.norm2


def volume_form(product: ProductHermitian) -> ExteriorForm:
    """``Phi1^{n1} ^ Phi2^{n2} ^ eta1 ^ eta2``."""
    p = product
    return wedge_all(power(p.Phi1, p.n1), power(p.Phi2, p.n2), p.eta1_form, p.eta2_form)


def k_gauduchon_form(product: ProductHermitian, k: int, cache: dict | None = None) -> ExteriorForm:
    """``dd^c(omega^k) ^ omega^{n-k-1}``."""
    cache = {} if cache is None else cache
    om = product.omega
    return wedge(dd_c(product, power(om, k, cache)), power(om, product.n - k - 1, cache))


def k_gauduchon_prediction(product: ProductHermitian, k: int) -> ExteriorForm:
    """``4 b k (k - n + 1) C`` times the volume form."""
    p = product
    return volume_form(p).scale(4 * p.b * k * (k - p.n + 1) * certificate_constant(p))


@dataclass(frozen=True, eq=False)
class HermitianClassReport:
    """Class flags; ``None`` marks a condition that does not apply in this dimension."""

    kahler: bool
    balanced: bool
    lck: bool | None
    vaisman: bool | None
    skt: bool
    astheno_kahler: bool | None
    gauduchon: bool | None
    k_gauduchon: dict = field(default_factory=dict)
    lee_form: ExteriorForm | None = None
    certificate_C: object = None

    def flags(self) -> dict:
        return {
            "kahler": self.kahler,
            "balanced": self.balanced,
            "lck": self.lck,
            "vaisman": self.vaisman,
            "skt": self.skt,
            "astheno_kahler": self.astheno_kahler,
            "gauduchon": self.gauduchon,
        }


def classify(product: ProductHermitian) -> HermitianClassReport:
    p = product
    om = p.omega
    n = p.n
    d_omega = exterior_derivative(p, om)
    kahler = d_omega.is_zero(om)
    balanced = bool(vanishes(codifferential_2form(p, p.omega_matrix), p.metric))
    skt = dd_c(p, om).is_zero(om)

    lck = vaisman = None
    lee = None
    if n >= 2:
        lee_data = lee_form(p)
        lee = lee_data.theta
        lck = d_omega.equals(wedge(lee, om)) and exterior_derivative(p, lee).is_zero(lee)
        vaisman = lck and bool(vanishes(lee_data.nabla, lee_data.covector))

    cache: dict = {}
    k_flags = {k: k_gauduchon_form(p, k, cache).is_zero(om) for k in range(1, n)}
    astheno = dd_c(p, power(om, n - 2, cache)).is_zero(om) if n >= 3 else None
    return HermitianClassReport(
        kahler=kahler,
        balanced=balanced,
        lck=lck,
        vaisman=vaisman,
        skt=skt,
        astheno_kahler=astheno,
        gauduchon=k_flags.get(n - 1),
        k_gauduchon=k_flags,
        lee_form=lee,
        certificate_C=certificate_constant(p) if n >= 3 else None,
    )


def algebraic_criteria(product: ProductHermitian) -> dict:
    """Class flags predicted from ``n1, n2, a, b`` alone, for comparison with :func:`classify`."""
    p = product
    n1, n2, n = p.n1, p.n2, p.n
    matsuo_zero = bool(vanishes(matsuo_expression(p), p.a, p.b))
    lck = None if n1 + n2 == 0 else (n1 == 0) != (n2 == 0)
    return {
        "kahler": n1 + n2 == 0,
        "balanced": n1 + n2 == 0,
        "lck": lck,
        "vaisman": lck,
        "skt": n1 + n2 <= 1 or (n1 == 1 and n2 == 1 and bool(vanishes(p.a))),
        "astheno_kahler": matsuo_zero if n >= 3 else None,
        "gauduchon": True if n >= 2 else None,
        "k_gauduchon": {k: (n - 1 - k) == 0 or matsuo_zero for k in range(1, n)},
    }
