"""Almost contact metric structures on metric Lie algebras.

Provides Sasakian validation, the transverse and characteristic connections,
eta-Einstein detection, D-homothetic deformations and a small catalog of
Sasakian Lie algebras.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import tensors as tz
from .errors import ValidationError
from .forms import ExteriorForm
from .lie_metric import LieAlgebra, MetricLieAlgebra, ce_differential
from .scalars import EXACT, agree, frozen, is_float_scalar, positive, scalar_to_backend, to_backend, vanishes

POSITIVE = "positive"
NULL = "null"
NEGATIVE = "negative"


@dataclass(frozen=True, eq=False)
class SasakiStructure:
    """``(phi, xi, eta)`` on a metric Lie algebra; ``phi[:, j]`` is ``phi(b_j)``.

    Construction only checks shapes. Use :func:`verify_sasakian` for the axioms.
    """

    algebra: MetricLieAlgebra
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    name: str = ""

    def __post_init__(self):
        n = self.algebra.dim
        backend = self.algebra.backend
        phi = to_backend(np.asarray(self.phi), backend)
        xi = to_backend(np.asarray(self.xi), backend)
        eta = to_backend(np.asarray(self.eta), backend)
        if phi.shape != (n, n) or xi.shape != (n,) or eta.shape != (n,):
            raise ValidationError(
                f"structure tensors have shapes {phi.shape}, {xi.shape}, {eta.shape} in dimension {n}"
            )
        if n % 2 == 0:
            raise ValidationError(f"almost contact structures need odd dimension, got {n}")
        object.__setattr__(self, "phi", frozen(phi))
        object.__setattr__(self, "xi", frozen(xi))
        object.__setattr__(self, "eta", frozen(eta))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def n(self) -> int:
        """Half the rank of the contact distribution."""
        return (self.dim - 1) // 2

    @property
    def backend(self) -> str:
        return self.algebra.backend

    @property
    def metric(self) -> np.ndarray:
        return self.algebra.metric

    @property
    def structure(self) -> np.ndarray:
        return self.algebra.structure

    @cached_property
    def fundamental_matrix(self) -> np.ndarray:
        """``Phi[i, j] = g(b_i, phi b_j)``."""
        return frozen(self.metric.dot(self.phi))

    @cached_property
    def fundamental_form(self) -> ExteriorForm:
        return ExteriorForm.from_tensor(self.fundamental_matrix)

    @cached_property
    def eta_form(self) -> ExteriorForm:
        return ExteriorForm.covector(self.eta)

    def project(self, x) -> np.ndarray:
        """Component of ``x`` in the contact distribution, ``x - eta(x) xi``."""
        x = np.asarray(x)
        return x - self.eta.dot(x) * self.xi

    def contact_basis(self) -> list[np.ndarray]:
        """Projections of the basis vectors that are non-zero; they span the distribution."""
        out = []
        for i in range(self.dim):
            u = self.project(self.algebra.algebra.basis(i))
            if not vanishes(u):
                out.append(u)
        return out

    def with_backend(self, backend: str) -> "SasakiStructure":
        if backend == self.backend:
            return self
        return SasakiStructure(
            self.algebra.with_backend(backend),
            to_backend(self.phi, backend),
            to_backend(self.xi, backend),
            to_backend(self.eta, backend),
            self.name,
        )


@dataclass(frozen=True)
class SasakianVerdict:
    almost_contact: bool
    normal: bool
    contact_condition: bool
    failures: tuple[str, ...] = ()

    @property
    def sasakian(self) -> bool:
        return self.almost_contact and self.normal and self.contact_condition


def nijenhuis_phi(structure: SasakiStructure) -> np.ndarray:
    """``N[i, j, k]``: component ``k`` of ``[phi,phi](b_i,b_j) + d eta(b_i,b_j) xi``."""
    c = structure.structure
    phi = structure.phi
    phi2 = phi.dot(phi)
    out = tz.einsum("ai,bj,abk->ijk", phi, phi, c)
    out = out + tz.einsum("ijm,km->ijk", c, phi2)
    out = out - tz.einsum("ai,ajm,km->ijk", phi, c, phi)
    out = out - tz.einsum("bj,ibm,km->ijk", phi, c, phi)
    d_eta = -tz.einsum("ijm,m->ij", c, structure.eta)
    return out + tz.einsum("ij,k->ijk", d_eta, structure.xi)


def _almost_contact_failures(s: SasakiStructure) -> list[str]:
    n = s.dim
    g, phi, xi, eta = s.metric, s.phi, s.xi, s.eta
    ident = to_backend(np.eye(n, dtype=int), s.backend)
    checks = [
        ("phi^2 = -Id + eta(x)xi", phi.dot(phi) + ident - np.outer(xi, eta)),
        ("eta(xi) = 1", np.array([eta.dot(xi) - 1])),
        ("phi xi = 0", phi.dot(xi)),
        ("eta o phi = 0", eta.dot(phi)),
        ("g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)", phi.T.dot(g).dot(phi) - g + np.outer(eta, eta)),
        ("eta = g(xi, .)", g.dot(xi) - eta),
    ]
    return [label for label, residual in checks if not vanishes(residual, g, phi)]


def verify_sasakian(structure: SasakiStructure) -> SasakianVerdict:
    """Check the almost contact metric axioms, normality and ``d eta = 2 Phi``."""
    cached = structure.__dict__.get("_verdict")
    if cached is None:
        cached = _verify(structure)
        structure.__dict__["_verdict"] = cached
    return cached


def _verify(structure: SasakiStructure) -> SasakianVerdict:
    failures = _almost_contact_failures(structure)
    almost_contact = not failures
    normal = bool(vanishes(nijenhuis_phi(structure), structure.structure))
    if not normal:
        failures.append("N_phi = 0")
    d_eta = ce_differential(structure.eta_form, structure.algebra.algebra)
    contact = d_eta.equals(structure.fundamental_form.scale(2))
    if not contact:
        failures.append("d eta = 2 Phi")
    return SasakianVerdict(almost_contact, normal, contact, tuple(failures))


def require_sasakian(structure: SasakiStructure) -> None:
    verdict = verify_sasakian(structure)
    if not verdict.sasakian:
        label = structure.name or "structure"
        raise ValidationError(f"{label} is not Sasakian: " + "; ".join(verdict.failures))


def transverse_connection(structure: SasakiStructure, x, u) -> np.ndarray:
    """Transverse Levi-Civita derivative of ``u`` (in the contact distribution) along ``x``.

    Along the Reeb field it is the bracket ``[xi, u]``; along contact
    directions it is the projected Levi-Civita derivative.
    """
    x = np.asarray(x)
    u = np.asarray(u)
    if not vanishes(structure.eta.dot(u), u):
        raise ValidationError("transverse connection acts only on the contact distribution (eta(U) != 0)")
    gamma = structure.algebra.levi_civita
    along_reeb = structure.eta.dot(x)
    x_contact = structure.project(x)
    lie = structure.algebra.algebra.bracket(structure.xi, u)
    return along_reeb * lie + structure.project(tz.connection_apply(gamma, x_contact, u))


def characteristic_torsion(structure: SasakiStructure) -> np.ndarray:
    """``T[i, j, k]`` of ``2(-eta(X) phi Y + eta(Y) phi X + Phi(X,Y) xi)``."""
    eta, phi, xi = structure.eta, structure.phi, structure.xi
    out = -tz.einsum("i,kj->ijk", eta, phi) + tz.einsum("j,ki->ijk", eta, phi)
    out = out + tz.einsum("ij,k->ijk", structure.fundamental_matrix, xi)
    return 2 * out


def characteristic_connection(structure: SasakiStructure) -> np.ndarray:
    """Metric connection with skew torsion that parallelises ``phi``, ``xi`` and ``eta``."""
    require_sasakian(structure)
    return structure.algebra.levi_civita + characteristic_torsion(structure) / 2


@dataclass(frozen=True)
class EtaEinsteinConstants:
    lam: object
    nu: object
    klass: str

    @staticmethod
    def classify(lam) -> str:
        if is_float_scalar(lam):
            if vanishes(lam + 2.0, lam):
                return NULL
        elif lam == -2:
            return NULL
        return POSITIVE if lam > -2 else NEGATIVE


def eta_einstein_constants(structure: SasakiStructure) -> EtaEinsteinConstants | None:
    """``(lam, nu)`` with ``Ric = lam g + nu eta(x)eta``, or ``None`` if no such pair exists.

    ``lam`` is read off a contact direction and ``nu = 2n - lam``; every entry
    of the Ricci tensor is then tested. A one-dimensional structure has no
    contact direction, so ``lam`` is undetermined and ``None`` is returned.
    """
    basis = structure.contact_basis()
    if not basis:
        return None
    u = basis[0]
    ric = structure.algebra.ricci
    g = structure.metric
    lam = u.dot(ric).dot(u) / u.dot(g).dot(u)
    nu = 2 * structure.n - lam
    residual = ric - lam * g - nu * np.outer(structure.eta, structure.eta)
    if not vanishes(residual, ric, g):
        return None
    return EtaEinsteinConstants(lam, nu, EtaEinsteinConstants.classify(lam))


def d_homothety(structure: SasakiStructure, s) -> SasakiStructure:
    """``(phi, xi/s, s eta, s g + s(s-1) eta(x)eta)`` for ``s > 0``."""
    s = scalar_to_backend(s, structure.backend)
    if not positive(s):
        raise ValidationError(f"D-homothety needs s > 0, got {s}")
    eta = structure.eta
    metric = s * structure.metric + s * (s - 1) * np.outer(eta, eta)
    out = SasakiStructure(
        MetricLieAlgebra(structure.algebra.algebra, metric),
        structure.phi,
        structure.xi / s,
        s * eta,
        f"{structure.name}(s={s})" if structure.name else "",
    )
    require_sasakian(out)
    return out


# ---------------------------------------------------------------- catalog

def _three_dim(name: str, brackets, backend: str) -> SasakiStructure:
    algebra = LieAlgebra.from_brackets(3, brackets, backend, name=name)
    phi = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=object)
    return SasakiStructure(MetricLieAlgebra(algebra), phi, [0, 0, 1], [0, 0, 1], name)


def heisenberg(n: int, backend: str = EXACT) -> SasakiStructure:
    """``h_{2n+1}`` with basis ``X_1..X_2n, xi`` and ``[X_{2i-1}, X_{2i}] = 2 xi``."""
    if n < 1:
        raise ValidationError(f"Heisenberg algebra needs n >= 1, got {n}")
    dim = 2 * n + 1
    brackets = {(2 * i, 2 * i + 1): {dim - 1: 2} for i in range(n)}
    labels = tuple(f"X{i + 1}" for i in range(2 * n)) + ("xi",)
    name = f"h{dim}"
    algebra = LieAlgebra.from_brackets(dim, brackets, backend, labels, name)
    phi = np.zeros((dim, dim), dtype=object)
    for i in range(n):
        phi[2 * i + 1, 2 * i] = 1
        phi[2 * i, 2 * i + 1] = -1
    reeb = [0] * (dim - 1) + [1]
    return SasakiStructure(MetricLieAlgebra(algebra), phi, reeb, reeb, name)


def abelian1(backend: str = EXACT) -> SasakiStructure:
    algebra = LieAlgebra.from_brackets(1, {}, backend, ("xi",), "abelian1")
    return SasakiStructure(MetricLieAlgebra(algebra), [[0]], [1], [1], "abelian1")


_THREE_DIM = {
    "su2": {(0, 1): {2: 2}, (1, 2): {0: 2}, (2, 0): {1: 2}},
    "sl2r": {(0, 1): {2: 2}, (1, 2): {0: -1}, (2, 0): {1: -1}},
}

CATALOG_NAMES = ("su2", "h3", "sl2r", "heisenberg(n)", "abelian1")

_HEIS_RE = re.compile(r"^(?:h(\d+)|heisenberg\((\d+)\)|heisenberg(\d+))$")


def catalog(name: str, backend: str = EXACT, n: int | None = None) -> SasakiStructure:
    """Built-in Sasakian Lie algebras.

    Names: ``su2``, ``h3``, ``sl2r``, ``abelian1``, ``heisenberg`` (with ``n``),
    ``heisenberg(n)``, or ``h<2n+1>`` such as ``h5``.
    """
    key = name.strip().lower()
    if key in _THREE_DIM:
        return _three_dim(key, _THREE_DIM[key], backend)
    if key == "abelian1":
        return abelian1(backend)
    if key == "heisenberg":
        if n is None:
            raise ValidationError("heisenberg needs a parameter n")
        return heisenberg(n, backend)
    m = _HEIS_RE.match(key)
    if m:
        if m.group(1):
            dim = int(m.group(1))
            if dim < 3 or dim % 2 == 0:
                raise ValidationError(f"unknown catalog entry {name!r}")
            return heisenberg((dim - 1) // 2, backend)
        return heisenberg(int(m.group(2) or m.group(3)), backend)
    raise ValidationError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}")


def is_catalog_name(name: str) -> bool:
    try:
        catalog(name)
    except ValidationError:
        return False
    return True


def homothety_lambda(lam, s):
    """Eta-Einstein constant after a D-homothety with factor ``s``."""
    return (lam + 2 - 2 * s) / s


def same_structure(first: SasakiStructure, second: SasakiStructure) -> bool:
    return (
        first.dim == second.dim
        and agree(first.structure, second.structure)
        and agree(first.metric, second.metric)
        and agree(first.phi, second.phi)
        and agree(first.xi, second.xi)
        and agree(first.eta, second.eta)
    )
