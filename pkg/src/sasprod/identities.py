"""Residuals of the structural identities satisfied by Sasakian factors and their products.

Every function returns a list of :class:`Residual`, one per identity, each
holding the stacked left-minus-right values over all basis tuples.  An
identity holds when its residual vanishes (exactly, or within epsilon on the
float backend).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian

import numpy as np

from . import tensors as tz
from .lie_metric import metric_defect
from .product_hermitian import (
    ProductHermitian,
    codifferential_J,
    derivative_of_J_along,
    nabla_J_closed_form,
    p_tensor,
    product_levi_civita,
)
from .sasaki import SasakiStructure, characteristic_connection, transverse_connection
from .scalars import max_abs, vanishes


@dataclass(frozen=True, eq=False)
class Residual:
    name: str
    value: np.ndarray
    scale: np.ndarray | None = None

    @property
    def holds(self) -> bool:
        if self.scale is None:
            return bool(vanishes(self.value))
        return bool(vanishes(self.value, self.scale))

    @property
    def size(self) -> float:
        return max_abs(self.value)


def failures(residuals: list[Residual]) -> list[str]:
    return [r.name for r in residuals if not r.holds]


def _stack(vectors, like) -> np.ndarray:
    vectors = list(vectors)
    if not vectors:
        return tz.zeros((0,), like)
    return np.stack([np.asarray(v) for v in vectors])


# ------------------------------------------------------------- Sasakian

def sasakian_identities(structure: SasakiStructure) -> list[Residual]:
    """Killing Reeb field, ``nabla xi = -phi``, ``nabla_xi X = [xi, X] - phi X``, ``nabla phi``, ``[xi, X]`` in the contact distribution."""
    s = structure
    g, xi, eta, phi = s.metric, s.xi, s.eta, s.phi
    gamma = s.algebra.levi_civita
    ad_xi = s.algebra.algebra.ad(xi)
    ident = tz.zeros((s.dim, s.dim), g) + np.eye(s.dim, dtype=int)
    # column u of nabla_xi_matrix is nabla_{b_u} xi
    nabla_xi = tz.einsum("ujk,j->ku", gamma, xi)
    along_xi = tz.einsum("i,ijk->kj", xi, gamma)
    nabla_phi = tz.derivative_of_endomorphism(gamma, phi)
    expected_phi = tz.einsum("uw,k->ukw", g, xi) - tz.einsum("w,ku->ukw", eta, ident)
    return [
        Residual("reeb_unit", np.array([xi.dot(g).dot(xi) - 1])),
        Residual("reeb_killing", ad_xi.T.dot(g) + g.dot(ad_xi), g),
        Residual("nabla_reeb", nabla_xi + phi, phi),
        Residual("nabla_along_reeb", along_xi - ad_xi + phi, phi),
        Residual("nabla_phi", nabla_phi - expected_phi, g),
        Residual("reeb_bracket_contact", eta.dot(ad_xi), eta),
    ]


def characteristic_identities(structure: SasakiStructure) -> list[Residual]:
    """The characteristic connection is metric and parallelises ``phi``, ``eta`` and ``xi``."""
    s = structure
    gamma = characteristic_connection(s)
    return [
        Residual("characteristic_metric", metric_defect(s.algebra, gamma), s.metric),
        Residual("characteristic_phi", tz.derivative_of_endomorphism(gamma, s.phi), s.phi),
        Residual("characteristic_eta", tz.derivative_of_covariant(gamma, s.eta), s.eta),
        Residual("characteristic_reeb", tz.derivative_of_vector(gamma, s.xi), s.xi),
    ]


def transverse_identities(structure: SasakiStructure) -> list[Residual]:
    """Defining properties of the transverse connection and the curvature comparison on contact triples."""
    s = structure
    contact = s.contact_basis()
    if not contact:
        return []
    like = s.metric
    phi, xi, g = s.phi, s.xi, s.metric
    Phi = s.fundamental_matrix
    lie = s.algebra.algebra
    gamma = s.algebra.levi_civita
    R = s.algebra.curvature
    basis = [lie.basis(i) for i in range(s.dim)]

    def nt(x, u):
        return transverse_connection(s, x, u)

    def nabla(x, u):
        return tz.connection_apply(gamma, x, u)

    def form(x, y):
        return x.dot(Phi).dot(y)

    def curv(u, v, w):
        return w.dot(tz.einsum("i,j,ijkl->kl", u, v, R))

    def curv_t(u, v, w):
        return nt(u, nt(v, w)) - nt(v, nt(u, w)) - nt(lie.bracket(u, v), w)

    parallel_phi, parallel_g = [], []
    for x, u in cartesian(basis, contact):
        parallel_phi.append(nt(x, phi.dot(u)) - phi.dot(nt(x, u)))
        for v in contact:
            parallel_g.append(nt(x, u).dot(g).dot(v) + u.dot(g).dot(nt(x, v)))

    torsion, split, bracket_split = [], [], []
    reeb_shift, bracket_derivative, curvature_compare, reeb_kernel, preserves, commutes = [], [], [], [], [], []
    for u, v in cartesian(contact, contact):
        br = lie.bracket(u, v)
        br_d = s.project(br)
        torsion.append(nt(u, v) - nt(v, u) - br_d)
        split.append(nabla(u, v) + form(u, v) * xi - nt(u, v))
        bracket_split.append(br + 2 * form(u, v) * xi - br_d)
        reeb_kernel.append(curv(u, v, xi))
        for w in contact:
            reeb_shift.append(nt(br_d, w) - nt(br, w) - 2 * form(u, v) * lie.bracket(xi, w))
            bracket_derivative.append(nabla(br, w) - 2 * form(u, v) * phi.dot(w) + form(br_d, w) * xi - nt(br, w))
            rhs = curv_t(u, v, w) + form(v, w) * phi.dot(u) - form(u, w) * phi.dot(v) - 2 * form(u, v) * phi.dot(w)
            curvature_compare.append(curv(u, v, w) - rhs)
            preserves.append(np.array([s.eta.dot(curv(u, v, w))]))
    for u, w in cartesian(contact, contact):
        pu = phi.dot(u)
        commutes.append(curv(u, pu, phi.dot(w)) - phi.dot(curv(u, pu, w)))

    return [
        Residual("transverse_phi_parallel", _stack(parallel_phi, like), phi),
        Residual("transverse_metric", _stack(parallel_g, like), g),
        Residual("transverse_torsion", _stack(torsion, like), g),
        Residual("levi_civita_contact_split", _stack(split, like), g),
        Residual("bracket_contact_split", _stack(bracket_split, like), g),
        Residual("transverse_along_bracket", _stack(reeb_shift, like), g),
        Residual("levi_civita_along_bracket", _stack(bracket_derivative, like), g),
        Residual("curvature_vs_transverse", _stack(curvature_compare, like), g),
        Residual("curvature_kills_reeb", _stack(reeb_kernel, like), g),
        Residual("curvature_preserves_contact", _stack(preserves, like), g),
        Residual("curvature_commutes_phi", _stack(commutes, like), g),
    ]


# -------------------------------------------------------------- product

def _lifted_contact(p: ProductHermitian, factor: int) -> list[np.ndarray]:
    structure = p.first if factor == 1 else p.second
    return [p._lift(u, factor) for u in structure.contact_basis()]


def _lifted_basis(p: ProductHermitian, factor: int) -> list[np.ndarray]:
    structure = p.first if factor == 1 else p.second
    lie = structure.algebra.algebra
    return [p._lift(lie.basis(i), factor) for i in range(structure.dim)]


def product_connection_identities(product: ProductHermitian) -> list[Residual]:
    """Closed forms versus direct computation for ``nabla`` and ``nabla J``, plus ``delta J`` and ``P``."""
    p = product
    g, J = p.metric, p.J
    gamma = p.levi_civita
    xis = (p.xi1, p.xi2)
    reeb = [tz.connection_apply(gamma, x, y) for x, y in cartesian(xis, xis)]
    delta = codifferential_J(p)
    P = p_tensor(p)
    low_P = g.dot(P)
    return [
        Residual("levi_civita_closed_form", product_levi_civita(p) - gamma, g),
        Residual("reeb_fields_parallel_along_reeb", _stack(reeb, g), g),
        Residual("nabla_J_closed_form", nabla_J_closed_form(p) - p.nabla_J, J),
        Residual("nabla_J_along_reeb", _stack([derivative_of_J_along(p, x) for x in xis], g), J),
        Residual("codifferential_J", delta - 2 * p.n1 * p.xi1 - 2 * p.n2 * p.xi2, g),
        Residual("nabla_J_along_codifferential", derivative_of_J_along(p, delta), J),
        Residual("P_commutes_J", tz.commutator(J, P), J),
        Residual("P_skew", low_P + low_P.T, g),
    ]


def product_curvature_identities(product: ProductHermitian) -> list[Residual]:
    """Block structure of the product Levi-Civita curvature on contact sections of each factor."""
    p = product
    R = p.curvature
    g = p.metric
    a, lam = p.a, p.params.lambda_ab
    R1 = p._lift(p.first.algebra.curvature, 1)
    R2 = p._lift(p.second.algebra.curvature, 2)
    P1, P2 = p.Phi1_matrix, p.Phi2_matrix

    def curv(tensor, u, v):
        """Matrix ``M[k, l]`` with ``R(u, v) b_k = sum_l M[k, l] b_l``."""
        return tz.einsum("i,j,ijkl->kl", u, v, tensor)

    reeb_pair = curv(R, p.xi1, p.xi2)
    same1, cross12, cross21, same2, kills_reeb = [], [], [], [], []
    c1, c2 = _lifted_contact(p, 1), _lifted_contact(p, 2)
    b1, b2 = _lifted_basis(p, 1), _lifted_basis(p, 2)
    for u, v in cartesian(c1, c1):
        f = u.dot(P1).dot(v)
        m, m1 = curv(R, u, v), curv(R1, u, v)
        same1.extend(z.dot(m) - z.dot(m1) for z in b1)
        cross12.extend(z.dot(m) + 2 * a * f * p.phi2.dot(z) for z in b2)
        kills_reeb.extend(x.dot(m) for x in (p.xi1, p.xi2))
    for u, v in cartesian(c2, c2):
        f = u.dot(P2).dot(v)
        m, m2 = curv(R, u, v), curv(R2, u, v)
        cross21.extend(z.dot(m) + 2 * a * f * p.phi1.dot(z) for z in b1)
        for z in b2:
            corr = v.dot(P2).dot(z) * p.phi2.dot(u) - u.dot(P2).dot(z) * p.phi2.dot(v) - 2 * f * p.phi2.dot(z)
            same2.append(z.dot(m) - z.dot(m2) - lam * corr)
        kills_reeb.extend(x.dot(m) for x in (p.xi1, p.xi2))
    return [
        Residual("curvature_reeb_pair", reeb_pair, g),
        Residual("curvature_first_block", _stack(same1, g), g),
        Residual("curvature_first_on_second", _stack(cross12, g), g),
        Residual("curvature_second_on_first", _stack(cross21, g), g),
        Residual("curvature_second_block", _stack(same2, g), g),
        Residual("curvature_contact_kills_reeb", _stack(kills_reeb, g), g),
    ]


def bismut_identities(product: ProductHermitian) -> list[Residual]:
    """Torsion frame table, parallel tensors and the symmetries of ``Ric^B`` and ``rho^B``."""
    from .bismut import (
        bismut_connection,
        bismut_torsion,
        lambda_omega,
        pair_symmetry_defect,
        rho_bismut,
        ricci_bismut,
        torsion_codifferential,
        torsion_derivative,
    )
    from .hermitian_classes import lee_form

    p = product
    g, J = p.metric, p.J
    a, b, s = p.a, p.b, p.params.norm2
    gamma = bismut_connection(p)
    T = bismut_torsion(p)
    xi1, xi2, e1, e2 = p.xi1, p.xi2, p.eta1, p.eta2
    f1, f2, P1, P2 = p.phi1, p.phi2, p.Phi1_matrix, p.Phi2_matrix
    j_xi1 = J.dot(xi1)

    def tor(x, y):
        return tz.einsum("i,j,ijk->k", x, y, T.tensor)

    table = []
    c1, c2 = _lifted_contact(p, 1), _lifted_contact(p, 2)
    for x in _lifted_basis(p, 1):
        table.append(tor(x, xi1) - 2 * f1.dot(x))
        table.append(tor(x, j_xi1))
        table.extend(tor(x, e) + 2 * (e1.dot(x) * f1.dot(e) + e.dot(P1).dot(x) * xi1) for e in c1)
        table.extend(tor(x, f) + 2 * a * e1.dot(x) * f2.dot(f) for f in c2)
    for x in _lifted_basis(p, 2):
        table.append(tor(x, xi1) - 2 * a * f2.dot(x))
        table.append(tor(x, j_xi1) - 2 * b * f2.dot(x))
        table.extend(tor(x, e) + 2 * a * e2.dot(x) * f1.dot(e) for e in c1)
        table.extend(tor(x, f) + 2 * s * e2.dot(x) * f2.dot(f) - 2 * x.dot(P2).dot(f) * xi2 for f in c2)
    contact_pairs = []
    for u, v in cartesian(c1, c1):
        contact_pairs.append(tor(u, v) - 2 * u.dot(P1).dot(v) * xi1)
    for u, v in cartesian(c2, c2):
        contact_pairs.append(tor(u, v) - 2 * u.dot(P2).dot(v) * xi2)
    for u, v in cartesian(c1, c2):
        contact_pairs.append(tor(u, v))

    ric, rho = ricci_bismut(p), rho_bismut(p)
    out = [
        Residual("bismut_metric", metric_defect(p.algebra, gamma), g),
        Residual("bismut_J", tz.derivative_of_endomorphism(gamma, J), J),
        Residual("bismut_reeb", _stack([tz.derivative_of_vector(gamma, x) for x in (xi1, xi2)], g), g),
        Residual("bismut_torsion_parallel", torsion_derivative(p), T.lowered),
        Residual("bismut_torsion_coclosed", torsion_codifferential(p), T.lowered),
        Residual("bismut_torsion_table", _stack(table, g), g),
        Residual("bismut_torsion_contact_pairs", _stack(contact_pairs, g), g),
        Residual("bismut_pair_symmetry", pair_symmetry_defect(p), g),
        Residual("bismut_ricci_symmetric", ric - ric.T, g),
        Residual("bismut_ricci_reeb", _stack([ric.dot(xi1), ric.dot(xi2)], g), g),
        Residual("bismut_rho_reeb", _stack([rho.dot(xi1), rho.dot(xi2)], g), g),
        Residual("bismut_rho_J_invariant", J.T.dot(rho).dot(J) - rho, g),
    ]
    if p.n1 + p.n2 >= 1:
        out.append(Residual("lee_form_bismut_parallel", lee_form(p).nabla_bismut, g))
    if p.n1 >= 1 and p.n2 >= 1:
        lam = lambda_omega(p)
        out.append(Residual("lambda_omega_reeb", _stack([lam.dot(xi1), lam.dot(xi2)], g), g))
    return out


def all_product_identities(product: ProductHermitian) -> list[Residual]:
    p = product
    out = []
    for structure in (p.first, p.second):
        out += sasakian_identities(structure) + characteristic_identities(structure) + transverse_identities(structure)
    return out + product_connection_identities(p) + product_curvature_identities(p) + bismut_identities(p)
