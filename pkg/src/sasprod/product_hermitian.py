"""Hermitian structures ``(J, g)`` on the product of two Sasakian Lie algebras.

For parameters ``a, b`` with ``b != 0`` the product carries

* ``J xi1 = -(a/b) xi1 + (1/b) xi2``, ``J xi2 = -((a^2+b^2)/b) xi1 + (a/b) xi2``,
  and ``J = phi_i`` on each contact distribution;
* ``g = g1 + g2 + a(eta1 eta2 + eta2 eta1) + (a^2+b^2-1) eta2 eta2``.

All derived tensors (connection, curvature, covariant derivatives of ``J``)
are computed on the basis of the direct-sum algebra, first factor first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import tensors as tz
from .errors import ValidationError
from .forms import ExteriorForm, wedge
from .lie_metric import MetricLieAlgebra, direct_sum
from .sasaki import SasakiStructure, require_sasakian
from .scalars import EXACT, FLOAT, frozen, scalar_to_backend, to_backend, vanishes

MAX_DIMENSION = 12


@dataclass(frozen=True)
class HermitianParams:
    a: object
    b: object

    def __post_init__(self):
        if vanishes(self.b):
            raise ValidationError("the parameter b must be non-zero")

    @property
    def lambda_ab(self):
        """``a^2 + b^2 - 1``."""
        return self.a * self.a + self.b * self.b - 1

    @property
    def norm2(self):
        """``a^2 + b^2``, the squared length of ``xi2``."""
        return self.a * self.a + self.b * self.b

    def with_backend(self, backend: str) -> "HermitianParams":
        return HermitianParams(scalar_to_backend(self.a, backend), scalar_to_backend(self.b, backend))


def _embed_vector(v: np.ndarray, offset: int, total: int) -> np.ndarray:
    out = tz.zeros(total, v)
    out[offset:offset + v.shape[0]] = v
    return out


def _embed_block(arr: np.ndarray, offset: int, total: int) -> np.ndarray:
    out = tz.zeros((total,) * arr.ndim, arr)
    idx = tuple(slice(offset, offset + s) for s in arr.shape)
    out[idx] = arr
    return out


@dataclass(frozen=True, eq=False)
class ProductHermitian:
    """Validated Hermitian structure on ``first x second``."""

    first: SasakiStructure
    second: SasakiStructure
    params: HermitianParams

    def __post_init__(self):
        backend = EXACT if first_and_second_exact(self.first, self.second) else FLOAT
        s1, s2 = self.first.with_backend(backend), self.second.with_backend(backend)
        dim = s1.dim + s2.dim
        if dim > MAX_DIMENSION:
            raise ValidationError(f"product dimension {dim} exceeds the supported maximum {MAX_DIMENSION}")
        require_sasakian(s1)
        require_sasakian(s2)
        object.__setattr__(self, "first", s1)
        object.__setattr__(self, "second", s2)
        object.__setattr__(self, "params", self.params.with_backend(backend))
        self._validate()

    # ------------------------------------------------------------ basic data
    @property
    def a(self):
        return self.params.a

    @property
    def b(self):
        return self.params.b

    @property
    def backend(self) -> str:
        return self.first.backend

    @property
    def n1(self) -> int:
        return self.first.n

    @property
    def n2(self) -> int:
        return self.second.n

    @property
    def n(self) -> int:
        """Complex dimension ``n1 + n2 + 1``."""
        return self.n1 + self.n2 + 1

    @property
    def dim(self) -> int:
        return self.first.dim + self.second.dim

    @property
    def offset(self) -> int:
        """Index of the first basis vector of the second factor."""
        return self.first.dim

    def _lift(self, arr, factor: int) -> np.ndarray:
        off = 0 if factor == 1 else self.offset
        if arr.ndim == 1:
            return frozen(_embed_vector(arr, off, self.dim))
        return frozen(_embed_block(arr, off, self.dim))

    @cached_property
    def xi1(self):
        return self._lift(self.first.xi, 1)

    @cached_property
    def xi2(self):
        return self._lift(self.second.xi, 2)

    @cached_property
    def eta1(self):
        return self._lift(self.first.eta, 1)

    @cached_property
    def eta2(self):
        return self._lift(self.second.eta, 2)

    @cached_property
    def phi1(self):
        return self._lift(self.first.phi, 1)

    @cached_property
    def phi2(self):
        return self._lift(self.second.phi, 2)

    @cached_property
    def g1(self):
        return self._lift(self.first.metric, 1)

    @cached_property
    def g2(self):
        return self._lift(self.second.metric, 2)

    @cached_property
    def identity1(self):
        """Projection onto the first factor."""
        return self._lift(to_backend(np.eye(self.first.dim, dtype=int), self.backend), 1)

    @cached_property
    def identity2(self):
        return self._lift(to_backend(np.eye(self.second.dim, dtype=int), self.backend), 2)

    @cached_property
    def Phi1_matrix(self):
        return self._lift(self.first.fundamental_matrix, 1)

    @cached_property
    def Phi2_matrix(self):
        return self._lift(self.second.fundamental_matrix, 2)

    @cached_property
    def Phi1(self) -> ExteriorForm:
        return ExteriorForm.from_tensor(self.Phi1_matrix)

    @cached_property
    def Phi2(self) -> ExteriorForm:
        return ExteriorForm.from_tensor(self.Phi2_matrix)

    @cached_property
    def eta1_form(self) -> ExteriorForm:
        return ExteriorForm.covector(self.eta1)

    @cached_property
    def eta2_form(self) -> ExteriorForm:
        return ExteriorForm.covector(self.eta2)

    @cached_property
    def J(self) -> np.ndarray:
        a, b = self.a, self.b
        j = self.phi1 + self.phi2
        j = j + np.outer(self.xi1, -(a / b) * self.eta1 - (self.params.norm2 / b) * self.eta2)
        j = j + np.outer(self.xi2, (1 / b) * self.eta1 + (a / b) * self.eta2)
        return frozen(j)

    @cached_property
    def metric(self) -> np.ndarray:
        a = self.a
        g = self.g1 + self.g2 + self.params.lambda_ab * np.outer(self.eta2, self.eta2)
        g = g + a * (np.outer(self.eta1, self.eta2) + np.outer(self.eta2, self.eta1))
        return frozen(g)

    @cached_property
    def algebra(self) -> MetricLieAlgebra:
        lie = direct_sum(self.first.algebra.algebra, self.second.algebra.algebra)
        return MetricLieAlgebra(lie, self.metric)

    @property
    def structure(self) -> np.ndarray:
        return self.algebra.structure

    @property
    def inverse_metric(self) -> np.ndarray:
        return self.algebra.inverse_metric

    @cached_property
    def omega_matrix(self) -> np.ndarray:
        """``omega[i, j] = g(b_i, J b_j)``."""
        return frozen(self.metric.dot(self.J))

    @cached_property
    def omega(self) -> ExteriorForm:
        return ExteriorForm.from_tensor(self.omega_matrix)

    @cached_property
    def omega_closed_form(self) -> ExteriorForm:
        """``Phi1 + Phi2 - b eta1 ^ eta2``."""
        return self.Phi1 + self.Phi2 - wedge(self.eta1_form, self.eta2_form).scale(self.b)

    def basis(self, i: int) -> np.ndarray:
        return self.algebra.algebra.basis(i)

    def _validate(self):
        n = self.dim
        ident = to_backend(np.eye(n, dtype=int), self.backend)
        J, g = self.J, self.metric
        problems = []
        if not vanishes(J.dot(J) + ident, J):
            problems.append("J^2 != -Id")
        if not vanishes(J.T.dot(g).dot(J) - g, g):
            problems.append("g(JX, JY) != g(X, Y)")
        if not vanishes(nijenhuis_J(self), self.structure):
            problems.append("Nijenhuis tensor of J does not vanish")
        if not self.omega.equals(self.omega_closed_form):
            problems.append("omega != Phi1 + Phi2 - b eta1^eta2")
        if problems:
            raise ValidationError("invalid product Hermitian structure: " + "; ".join(problems))

    # ------------------------------------------------------- geometry caches
    @cached_property
    def levi_civita(self) -> np.ndarray:
        """Levi-Civita connection from the Koszul formula on the sum algebra."""
        return self.algebra.levi_civita

    @cached_property
    def curvature(self) -> np.ndarray:
        return self.algebra.curvature

    @cached_property
    def nabla_J(self) -> np.ndarray:
        return frozen(tz.derivative_of_endomorphism(self.levi_civita, self.J))

    def with_backend(self, backend: str) -> "ProductHermitian":
        return ProductHermitian(
            self.first.with_backend(backend), self.second.with_backend(backend), self.params.with_backend(backend)
        )


def first_and_second_exact(first: SasakiStructure, second: SasakiStructure) -> bool:
    return first.backend == EXACT and second.backend == EXACT


def build_product(first: SasakiStructure, second: SasakiStructure, a, b=None) -> ProductHermitian:
    """Product structure for ``params`` (a :class:`HermitianParams`) or the pair ``a, b``."""
    params = a if isinstance(a, HermitianParams) else HermitianParams(a, b)
    backend = EXACT if first_and_second_exact(first, second) else FLOAT
    if backend == EXACT and any(isinstance(v, float) for v in (params.a, params.b)):
        raise ValidationError("exact backend needs rational parameters; use the float backend for floats")
    return ProductHermitian(first, second, params.with_backend(backend))


def nijenhuis_J(product: ProductHermitian) -> np.ndarray:
    """``N[i, j, k]`` of ``[JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]``."""
    c, J = product.structure, product.J
    return tz.einsum_sum(
        [
            (1, "ai,bj,abk->ijk", (J, J, c)),
            (-1, "ai,ajm,km->ijk", (J, c, J)),
            (-1, "bj,ibm,km->ijk", (J, c, J)),
            (-1, "ijk->ijk", (c,)),
        ]
    )


def product_levi_civita(product: ProductHermitian) -> np.ndarray:
    """Levi-Civita connection assembled from the factor connections.

    Each correction term is written with lifted tensors, so it vanishes
    automatically outside the block it belongs to.
    """
    p = product
    gamma = p._lift(p.first.algebra.levi_civita, 1) + p._lift(p.second.algebra.levi_civita, 2)
    e1, e2, f1, f2 = p.eta1, p.eta2, p.phi1, p.phi2
    # second factor: -lambda [eta2(X) phi2 Y + eta2(Y) phi2 X]
    gamma = gamma - p.params.lambda_ab * (tz.einsum("i,kj->ijk", e2, f2) + tz.einsum("j,ki->ijk", e2, f2))
    # X in first, Y in second: -a [eta2(Y) phi1 X + eta1(X) phi2 Y]
    mixed = tz.einsum("j,ki->ijk", e2, f1) + tz.einsum("i,kj->ijk", e1, f2)
    # X in second, Y in first: -a [eta2(X) phi1 Y + eta1(Y) phi2 X]
    mixed = mixed + tz.einsum("i,kj->ijk", e2, f1) + tz.einsum("j,ki->ijk", e1, f2)
    return gamma - p.a * mixed


def nabla_J_closed_form(product: ProductHermitian) -> np.ndarray:
    """``D[u, k, w] = ((nabla_{b_u} J) b_w)^k`` assembled block by block."""
    p = product
    a, b, s = p.a, p.b, p.params.norm2
    xi1, xi2, e1, e2 = p.xi1, p.xi2, p.eta1, p.eta2
    P1, P2 = p.Phi1_matrix, p.Phi2_matrix
    id1, id2 = p.identity1, p.identity2
    # out[u, w, k]
    out = tz.einsum("uw,k->uwk", p.g1 - (a / b) * P1, xi1) + tz.einsum("uw,k->uwk", P1 / b, xi2)
    out = out - tz.einsum("w,ku->uwk", e1, id1)
    block2 = p.g2 + p.params.lambda_ab * np.outer(e2, e2) + (a / b) * P2
    out = out + tz.einsum("uw,k->uwk", block2, xi2) - tz.einsum("uw,k->uwk", (s / b) * P2, xi1)
    out = out - s * tz.einsum("w,ku->uwk", e2, id2)
    # u in first, w in second
    out = out + a * tz.einsum("w,u,k->uwk", e2, e1, xi1)
    out = out - a * tz.einsum("w,ku->uwk", e2, id1) + b * tz.einsum("w,ku->uwk", e2, p.phi1)
    # u in second, w in first
    out = out + a * tz.einsum("w,u,k->uwk", e1, e2, xi2)
    out = out - a * tz.einsum("w,ku->uwk", e1, id2) - b * tz.einsum("w,ku->uwk", e1, p.phi2)
    return out.transpose(0, 2, 1)


def nabla_J(product: ProductHermitian) -> np.ndarray:
    """``D[u, k, w]`` computed head-on as ``nabla_u(J b_w) - J nabla_u b_w``."""
    return product.nabla_J


def derivative_of_J_along(product: ProductHermitian, v) -> np.ndarray:
    """Matrix of ``nabla_v J``."""
    return tz.einsum("u,ukw->kw", np.asarray(v), product.nabla_J)


def codifferential_J(product: ProductHermitian) -> np.ndarray:
    """``delta J = sum_ij g^{ij} (nabla_{b_i} J) b_j``."""
    return tz.einsum("ij,ikj->k", product.inverse_metric, product.nabla_J)


def second_derivative_J(product: ProductHermitian) -> np.ndarray:
    """``H[x, v, w, k]``: component ``k`` of ``(nabla^2_{b_x, b_v} J) b_w``."""
    as_mixed = product.nabla_J.transpose(0, 2, 1)  # [v, w, k]
    return tz.derivative_of_mixed(product.levi_civita, as_mixed)


def rough_laplacian_J(product: ProductHermitian) -> np.ndarray:
    """Metric trace of the second covariant derivative, as a matrix ``L[k, w]``."""
    hess = second_derivative_J(product)
    return tz.contract_pair(hess, product.inverse_metric, (0, 1)).T


def p_tensor(product: ProductHermitian) -> np.ndarray:
    """``P = 1/2 sum_ij g^{ij} R(b_i, J b_j)`` as a matrix ``P[k, w]``."""
    half_trace = tz.einsum("ij,mj,imwk->kw", product.inverse_metric, product.J, product.curvature)
    return half_trace / 2


@dataclass(frozen=True)
class HarmonicityResult:
    defect: np.ndarray
    harmonic: bool


def harmonicity_defect(product: ProductHermitian) -> HarmonicityResult:
    """``[J, nabla^* nabla J]`` and whether it vanishes."""
    defect = tz.commutator(product.J, rough_laplacian_J(product))
    return HarmonicityResult(defect, bool(vanishes(defect, product.J)))


def wood_residual(product: ProductHermitian) -> np.ndarray:
    """``[J, nabla^* nabla J] - 2(nabla_{delta J} J - [J, P])``."""
    J = product.J
    lap = rough_laplacian_J(product)
    along = derivative_of_J_along(product, codifferential_J(product))
    return tz.commutator(J, lap) - 2 * (along - tz.commutator(J, p_tensor(product)))
