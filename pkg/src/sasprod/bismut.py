"""Bismut connection of the product Hermitian structure and its curvature.

Each quantity is available through its definition (torsion from ``d^c omega``,
curvature from the connection, Ricci tensor and form by metric traces) and,
where one exists, through a block formula in terms of the Sasakian factors.
The two routes are meant to be compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensors as tz
from .errors import ValidationError
from .forms import ExteriorForm
from .hermitian_classes import d_c, dd_c, exterior_derivative
from .lie_metric import bianchi_defect
from .product_hermitian import ProductHermitian
from .sasaki import characteristic_connection
from .scalars import agree, frozen, vanishes


def _cached(product: ProductHermitian, key: str, build):
    """Memoise a derived tensor on the (immutable) product instance."""
    store = product.__dict__.setdefault("_bismut_cache", {})
    if key not in store:
        value = build()
        if isinstance(value, np.ndarray):
            value = frozen(value)
        store[key] = value
    return store[key]


@dataclass(frozen=True, eq=False)
class BismutTorsion:
    """Torsion as a 3-form, as ``T(b_i, b_j, b_k)`` values and as a vector-valued tensor ``T[i, j, k]``."""

    form: ExteriorForm
    lowered: np.ndarray
    tensor: np.ndarray


def bismut_torsion(product: ProductHermitian) -> BismutTorsion:
    def build():
        form = d_c(product, product.omega)
        lowered = form.to_tensor()
        if lowered.dtype != product.metric.dtype:
            lowered = lowered.astype(product.metric.dtype)
        return BismutTorsion(form, frozen(lowered), frozen(tz.raise_last(lowered, product.inverse_metric)))

    return _cached(product, "torsion", build)


def bismut_torsion_closed_form(product: ProductHermitian) -> ExteriorForm:
    """``2[Phi1 ^ (eta1 + a eta2) + Phi2 ^ (a eta1 + (a^2+b^2) eta2)]``."""
    p = product
    left = p.eta1_form + p.eta2_form.scale(p.a)
    right = p.eta1_form.scale(p.a) + p.eta2_form.scale(p.params.norm2)
    return ((p.Phi1 ^ left) + (p.Phi2 ^ right)).scale(2)


def bismut_connection(product: ProductHermitian) -> np.ndarray:
    """``Gamma^B = Gamma + T/2``."""
    return _cached(product, "connection", lambda: product.levi_civita + bismut_torsion(product).tensor / 2)


def bismut_connection_closed_form(product: ProductHermitian) -> np.ndarray:
    """Characteristic connections of the factors plus the mixing terms in ``a`` and ``a^2+b^2-1``."""
    p = product
    gamma = p._lift(characteristic_connection(p.first), 1) + p._lift(characteristic_connection(p.second), 2)
    e1, e2, f1, f2 = p.eta1, p.eta2, p.phi1, p.phi2
    gamma = gamma - 2 * p.params.lambda_ab * tz.einsum("i,kj->ijk", e2, f2)
    gamma = gamma - 2 * p.a * (tz.einsum("i,kj->ijk", e1, f2) + tz.einsum("i,kj->ijk", e2, f1))
    return gamma


def bismut_curvature(product: ProductHermitian) -> np.ndarray:
    return _cached(
        product, "curvature", lambda: tz.curvature_from_connection(bismut_connection(product), product.structure)
    )


def lowered_curvature(product: ProductHermitian) -> np.ndarray:
    """``R^B(X, Y, Z, W) = g(R^B(X, Y) Z, W)``."""
    return _cached(product, "curvature_low", lambda: tz.lower_last(bismut_curvature(product), product.metric))


def torsion_derivative(product: ProductHermitian) -> np.ndarray:
    """``(nabla^B_{b_u} T)(b_i, b_j, b_k)``."""
    return tz.derivative_of_covariant(bismut_connection(product), bismut_torsion(product).lowered)


def parallel_torsion_check(product: ProductHermitian) -> bool:
    return bool(vanishes(torsion_derivative(product), bismut_torsion(product).lowered))


def torsion_codifferential(product: ProductHermitian) -> np.ndarray:
    """``(delta T)(X, Y) = -sum_ij g^{ij} (nabla_{b_i} T)(b_j, X, Y)`` (Levi-Civita)."""
    nabla = tz.derivative_of_covariant(product.levi_civita, bismut_torsion(product).lowered)
    return -tz.contract_pair(nabla, product.inverse_metric, (0, 1))


def pair_symmetry_defect(product: ProductHermitian) -> np.ndarray:
    """``g(R^B(X,Y)Z, W) - g(R^B(Z,W)X, Y)``."""
    low = lowered_curvature(product)
    return low - low.transpose(2, 3, 0, 1)


# ----------------------------------------------------------------- Ricci

def ricci_bismut(product: ProductHermitian) -> np.ndarray:
    """``Ric^B(X, Y) = trace(Z -> R^B(Z, X) Y)``."""
    return _cached(product, "ricci", lambda: tz.einsum("ixyi->xy", bismut_curvature(product)))


def _lifted_ricci(product: ProductHermitian):
    return product._lift(product.first.algebra.ricci, 1), product._lift(product.second.algebra.ricci, 2)


def ricci_bismut_closed_form(product: ProductHermitian) -> np.ndarray:
    """Block formula in terms of the factor Ricci tensors."""
    p = product
    ric1, ric2 = _lifted_ricci(p)
    e1, e2 = p.eta1, p.eta2
    c2 = 2 * (2 * p.params.norm2 - 1)
    block1 = ric1 - 2 * p.g1 - (2 * p.n1 - 2) * np.outer(e1, e1)
    block2 = ric2 - c2 * p.g2 + (c2 - 2 * p.n2) * np.outer(e2, e2)
    return block1 + block2


def levi_civita_ricci_closed_form(product: ProductHermitian) -> np.ndarray:
    """Ricci tensor of the product metric from the factor Ricci tensors."""
    p = product
    ric1, ric2 = _lifted_ricci(p)
    e1, e2 = p.eta1, p.eta2
    a, s, lam = p.a, p.params.norm2, p.params.lambda_ab
    out = ric1 + 2 * a * a * p.n2 * np.outer(e1, e1)
    cross = 2 * a * (p.n1 + p.n2 * s)
    out = out + cross * (np.outer(e1, e2) + np.outer(e2, e1))
    coeff = 2 * (p.n1 * a * a + lam + p.n2 * s * s - p.n2)
    return out + ric2 - 2 * lam * p.g2 + coeff * np.outer(e2, e2)


def rho_bismut(product: ProductHermitian) -> np.ndarray:
    """``rho^B(X, Y) = 1/2 sum_ij g^{ij} g(R^B(X, Y) b_i, J b_j)``."""
    p = product

    def build():
        return tz.einsum("ij,xyim,mj->xy", p.inverse_metric, lowered_curvature(p), p.J) / 2

    return _cached(p, "rho", build)


def rho_bismut_closed_form(product: ProductHermitian) -> np.ndarray:
    """Block formula; a one-dimensional factor simply contributes nothing."""
    p = product
    ric1, ric2 = _lifted_ricci(p)
    a, s = p.a, p.params.norm2
    block1 = ric1.dot(p.phi1) - 2 * (2 * p.n1 + 2 * a * p.n2 - 1) * p.Phi1_matrix
    block2 = ric2.dot(p.phi2) - 2 * (2 * a * p.n1 + 2 * s * p.n2 - 1) * p.Phi2_matrix
    return block1 + block2


def lambda_omega(product: ProductHermitian) -> np.ndarray:
    """``lambda(X, Y) = sum_ij g^{ij} dT(X, Y, b_i, J b_j)``."""
    p = product
    if p.n1 < 1 or p.n2 < 1:
        raise ValidationError("lambda^omega needs both factors of dimension at least 3")
    dT = exterior_derivative(p, bismut_torsion(p).form).to_tensor()
    if dT.dtype != p.metric.dtype:
        dT = dT.astype(p.metric.dtype)
    return tz.einsum("ij,xyim,mj->xy", p.inverse_metric, dT, p.J)


def lambda_omega_closed_form(product: ProductHermitian) -> np.ndarray:
    p = product
    a, s = p.a, p.params.norm2
    return -16 * (p.n1 + a * p.n2 - 1) * p.Phi1_matrix - 16 * (a * p.n1 + s * (p.n2 - 1)) * p.Phi2_matrix


def ip_decomposition_residual(product: ProductHermitian) -> np.ndarray:
    """``rho^B(X,Y) - Ric^B(X, JY) - lambda(X,Y)/4`` (the Lee-form term vanishes here)."""
    p = product
    return rho_bismut(p) - ricci_bismut(p).dot(p.J) - lambda_omega(p) / 4


# ------------------------------------------------------- structural checks

def kahler_like_check(product: ProductHermitian) -> bool:
    """First Bianchi identity for ``R^B`` and ``R^B(JX, JY, Z, W) = R^B(X, Y, Z, W)``."""
    p = product
    R = bismut_curvature(p)
    if not vanishes(bianchi_defect(R), R):
        return False
    low = lowered_curvature(p)
    rotated = tz.einsum("ai,bj,abkw->ijkw", p.J, p.J, low)
    return bool(vanishes(rotated - low, low))


@dataclass(frozen=True)
class StaticVerdict:
    applicable: bool
    static: bool | None = None
    alpha: object = None


def static_check(product: ProductHermitian, skt: bool | None = None) -> StaticVerdict:
    """Static test ``(rho^B)^{1,1} = alpha omega``, defined only for SKT structures.

    ``alpha`` is read off the pair ``(xi1, xi2)``, where ``omega`` equals ``-b``.
    """
    p = product
    if skt is None:
        skt = dd_c(p, p.omega).is_zero(p.omega)
    if not skt:
        return StaticVerdict(False)
    rho = rho_bismut(p)
    rho11 = (rho + p.J.T.dot(rho).dot(p.J)) / 2
    om = p.omega_matrix
    alpha = p.xi1.dot(rho11).dot(p.xi2) / p.xi1.dot(om).dot(p.xi2)
    return StaticVerdict(True, bool(vanishes(rho11 - alpha * om, rho11, om)), alpha)


@dataclass(frozen=True, eq=False)
class BismutAnalysis:
    connection: np.ndarray
    torsion: BismutTorsion
    curvature: np.ndarray
    ricci: np.ndarray
    rho: np.ndarray
    ric_b_zero: bool
    cyt: bool
    parallel_torsion: bool
    delta_torsion_zero: bool
    kahler_like: bool
    static: StaticVerdict

    def flags(self) -> dict:
        return {
            "ric_b_zero": self.ric_b_zero,
            "cyt": self.cyt,
            "parallel_torsion": self.parallel_torsion,
            "delta_torsion_zero": self.delta_torsion_zero,
            "kahler_like": self.kahler_like,
            "static": self.static.static,
        }


def analyze_bismut(product: ProductHermitian, skt: bool | None = None) -> BismutAnalysis:
    p = product
    ric = ricci_bismut(p)
    rho = rho_bismut(p)
    torsion = bismut_torsion(p)
    return BismutAnalysis(
        connection=bismut_connection(p),
        torsion=torsion,
        curvature=bismut_curvature(p),
        ricci=ric,
        rho=rho,
        ric_b_zero=bool(vanishes(ric, p.metric)),
        cyt=bool(vanishes(rho, p.metric)),
        parallel_torsion=parallel_torsion_check(p),
        delta_torsion_zero=bool(vanishes(torsion_codifferential(p), torsion.lowered)),
        kahler_like=kahler_like_check(p),
        static=static_check(p, skt),
    )


def two_route_agreement(product: ProductHermitian) -> dict:
    """Direct versus block-formula results for ``Ric^B`` and ``rho^B``."""
    return {
        "ricci": agree(ricci_bismut(product), ricci_bismut_closed_form(product)),
        "rho": agree(rho_bismut(product), rho_bismut_closed_form(product)),
    }


from .solvers import (  # noqa: E402  (re-exported: the solvers belong to this module's interface)
    CytSolution,
    RicciFlatCircle,
    cyt_normalization,
    cyt_solve,
    ric_b_zero_solve,
    se_product_params,
)

__all__ = [
    "BismutAnalysis",
    "BismutTorsion",
    "CytSolution",
    "RicciFlatCircle",
    "StaticVerdict",
    "analyze_bismut",
    "bismut_connection",
    "bismut_connection_closed_form",
    "bismut_curvature",
    "bismut_torsion",
    "bismut_torsion_closed_form",
    "cyt_normalization",
    "cyt_solve",
    "ip_decomposition_residual",
    "kahler_like_check",
    "lambda_omega",
    "lambda_omega_closed_form",
    "levi_civita_ricci_closed_form",
    "pair_symmetry_defect",
    "parallel_torsion_check",
    "ric_b_zero_solve",
    "rho_bismut",
    "rho_bismut_closed_form",
    "ricci_bismut",
    "ricci_bismut_closed_form",
    "se_product_params",
    "static_check",
    "torsion_codifferential",
    "two_route_agreement",
]
