"""Metric Lie algebras and their left-invariant Riemannian geometry."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from . import tensors as tz
from .errors import ValidationError
from .forms import ExteriorForm
from .scalars import EXACT, FLOAT, det, frozen, inverse, is_float_array, leading_minors, positive, to_backend, vanishes


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Structure constants ``structure[i, j, k] = c^k_{ij}``, so ``[b_i, b_j] = sum_k c^k_{ij} b_k``."""

    structure: np.ndarray
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        c = np.asarray(self.structure)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ValidationError(f"structure constants must have shape (n, n, n), got {c.shape}")
        n = c.shape[0]
        if not vanishes(c + c.transpose(1, 0, 2), c):
            i, j, k = next(
                (i, j, k) for i, j, k in np.ndindex(c.shape) if not vanishes(c[i, j, k] + c[j, i, k], c)
            )
            raise ValidationError(f"bracket is not antisymmetric at (b{i + 1}, b{j + 1}), component {k + 1}")
        labels = tuple(self.labels) or tuple(f"e{i + 1}" for i in range(n))
        if len(labels) != n:
            raise ValidationError(f"{len(labels)} labels for dimension {n}")
        object.__setattr__(self, "structure", frozen(c.copy()))
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_brackets(cls, dim: int, brackets, backend: str = EXACT, labels=(), name: str = ""):
        """Build from ``{(i, j): {k: coefficient}}`` with 0-based indices; entries are antisymmetrised."""
        c = np.zeros((dim, dim, dim), dtype=object)
        for (i, j), image in brackets.items():
            if i == j:
                raise ValidationError(f"bracket [b{i + 1}, b{i + 1}] must vanish")
            for k, value in image.items():
                c[i, j, k] = c[i, j, k] + value
                c[j, i, k] = c[j, i, k] - value
        return cls(to_backend(c, backend), labels, name)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @property
    def backend(self) -> str:
        return FLOAT if is_float_array(self.structure) else EXACT

    def basis(self, i: int) -> np.ndarray:
        e = tz.zeros(self.dim, self.structure)
        e[i] = 1
        return e

    def bracket(self, x, y) -> np.ndarray:
        return tz.bracket_vectors(self.structure, np.asarray(x), np.asarray(y))

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad_x = [x, .]`` (column j is ``[x, b_j]``)."""
        return tz.einsum("i,ijk->kj", np.asarray(x), self.structure)

    def with_backend(self, backend: str) -> "LieAlgebra":
        return LieAlgebra(to_backend(self.structure, backend), self.labels, self.name)

    @cached_property
    def differentials(self) -> tuple[ExteriorForm, ...]:
        """``d e^k = -sum_{i<j} c^k_{ij} e^i ^ e^j`` for each dual basis covector."""
        n = self.dim
        return tuple(
            ExteriorForm(2, n, {(i, j): -self.structure[i, j, k] for i, j in combinations(range(n), 2)})
            for k in range(n)
        )


def direct_sum(first: LieAlgebra, second: LieAlgebra, name: str = "") -> LieAlgebra:
    """Componentwise bracket on ``first + second``; basis of ``first`` comes first."""
    n1, n2 = first.dim, second.dim
    like = first.structure if first.backend == second.backend else first.structure.astype(float)
    c = tz.zeros((n1 + n2,) * 3, like)
    c[:n1, :n1, :n1] = first.structure
    c[n1:, n1:, n1:] = second.structure
    labels = tuple(f"{l}" for l in first.labels) + tuple(f"{l}'" for l in second.labels)
    return LieAlgebra(c, labels, name or f"{first.name}+{second.name}")


def check_jacobi(algebra: LieAlgebra) -> tuple[bool, tuple[int, int, int] | None]:
    """Cyclic sum ``[[x,y],z] + [[y,z],x] + [[z,x],y]`` on basis triples.

    Returns ``(True, None)`` or ``(False, (i, j, k))`` for the first failing
    triple in lexicographic order (0-based).
    """
    c = algebra.structure
    # J[i,j,k,l] = sum_m c^m_ij c^l_mk + cyclic
    jac = tz.einsum("ijm,mkl->ijkl", c, c)
    cyc = jac + jac.transpose(1, 2, 0, 3) + jac.transpose(2, 0, 1, 3)
    for i, j, k in combinations(range(algebra.dim), 3):
        if not vanishes(cyc[i, j, k], c):
            return False, (i, j, k)
    return True, None


def ce_differential(alpha: ExteriorForm, algebra: LieAlgebra) -> ExteriorForm:
    """Exterior derivative of a left-invariant form, extended as a graded derivation."""
    if alpha.dim != algebra.dim:
        raise ValueError(f"form of dimension {alpha.dim} on algebra of dimension {algebra.dim}")
    if alpha.degree == 0 or alpha.degree >= alpha.dim:
        return ExteriorForm.zero(alpha.degree + 1, alpha.dim)
    d = algebra.differentials
    terms = []
    for key, value in alpha.coeffs.items():
        for pos, idx in enumerate(key):
            sign = -1 if pos % 2 else 1
            rest_l, rest_r = key[:pos], key[pos + 1:]
            for (i, j), cval in d[idx].coeffs.items():
                terms.append((rest_l + (i, j) + rest_r, sign * value * cval))
    return ExteriorForm.from_unsorted(alpha.degree + 1, alpha.dim, terms)


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    algebra: LieAlgebra
    metric: np.ndarray = field(default=None)

    def __post_init__(self):
        n = self.algebra.dim
        g = self.metric
        if g is None:
            g = np.eye(n, dtype=int)
        g = to_backend(np.asarray(g), self.algebra.backend)
        if g.shape != (n, n):
            raise ValidationError(f"metric of shape {g.shape} on algebra of dimension {n}")
        if not vanishes(g - g.T, g):
            raise ValidationError("metric is not symmetric")
        if is_float_array(g):
            if n and np.min(np.linalg.eigvalsh(g)) <= 0:
                raise ValidationError("metric is not positive definite")
        elif not all(positive(m) for m in leading_minors(g)):
            raise ValidationError("metric is not positive definite (a leading minor is <= 0)")
        object.__setattr__(self, "metric", frozen(g))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def backend(self) -> str:
        return self.algebra.backend

    @property
    def structure(self) -> np.ndarray:
        return self.algebra.structure

    def with_backend(self, backend: str) -> "MetricLieAlgebra":
        return MetricLieAlgebra(self.algebra.with_backend(backend), to_backend(self.metric, backend))

    @cached_property
    def inverse_metric(self) -> np.ndarray:
        return frozen(inverse(self.metric))

    def inner(self, x, y):
        return np.asarray(x).dot(self.metric).dot(np.asarray(y))

    def lower(self, x) -> np.ndarray:
        """Metric dual covector ``g(x, .)``."""
        return self.metric.dot(np.asarray(x))

    def raise_index(self, alpha) -> np.ndarray:
        return self.inverse_metric.dot(np.asarray(alpha))

    @cached_property
    def levi_civita(self) -> np.ndarray:
        return frozen(koszul_connection(self))

    @cached_property
    def curvature(self) -> np.ndarray:
        return frozen(riemann_curvature(self, self.levi_civita))

    @cached_property
    def ricci(self) -> np.ndarray:
        return frozen(ricci_tensor(self, self.curvature))

    @property
    def volume_determinant(self):
        return det(self.metric)


def koszul_connection(metric_algebra: MetricLieAlgebra) -> np.ndarray:
    """Levi-Civita connection of a left-invariant metric.

    ``2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)``.
    """
    c_low = tz.lower_last(metric_algebra.structure, metric_algebra.metric)
    # transpose(2, 0, 1)[i, j, m] = c_low[j, m, i]; transpose(1, 2, 0)[i, j, m] = c_low[m, i, j]
    low = (c_low - c_low.transpose(2, 0, 1) + c_low.transpose(1, 2, 0)) / 2
    return tz.raise_last(low, metric_algebra.inverse_metric)


def riemann_curvature(metric_algebra: MetricLieAlgebra, gamma: np.ndarray) -> np.ndarray:
    """``R[i, j, k, l]`` components of ``R(b_i, b_j) b_k`` for the connection ``gamma``."""
    return tz.curvature_from_connection(gamma, metric_algebra.structure)


def ricci_tensor(metric_algebra: MetricLieAlgebra, curvature: np.ndarray) -> np.ndarray:
    """``Ric(X, Y) = trace(Z -> R(Z, X) Y)``."""
    return tz.einsum("ixyi->xy", curvature)


def metric_defect(metric_algebra: MetricLieAlgebra, gamma: np.ndarray) -> np.ndarray:
    """``(nabla_u g)(b_i, b_j)``; zero for a metric connection."""
    return tz.derivative_of_covariant(gamma, metric_algebra.metric)


def torsion_tensor(metric_algebra: MetricLieAlgebra, gamma: np.ndarray) -> np.ndarray:
    return tz.torsion_from_connection(gamma, metric_algebra.structure)


def bianchi_defect(curvature: np.ndarray) -> np.ndarray:
    """Cyclic sum ``R(X,Y)Z + R(Y,Z)X + R(Z,X)Y``."""
    return curvature + curvature.transpose(1, 2, 0, 3) + curvature.transpose(2, 0, 1, 3)
