"""Hermitian geometry of products of Sasakian Lie algebras, computed exactly.

Typical use::

    from sasprod import catalog, build_product, classify, analyze_bismut
    P = build_product(catalog("h3"), catalog("su2"), -1, 1)
    classify(P).flags()
    analyze_bismut(P).flags()
"""

from .bismut import (
    BismutAnalysis,
    analyze_bismut,
    bismut_connection,
    bismut_curvature,
    bismut_torsion,
    kahler_like_check,
    lambda_omega,
    parallel_torsion_check,
    rho_bismut,
    ricci_bismut,
    static_check,
)
from .errors import NoSolutionError, SasprodError, ValidationError
from .forms import ExteriorForm, eval_form, wedge
from .hermitian_classes import HermitianClassReport, classify, d_c, j_on_forms, lee_form
from .lie_metric import (
    LieAlgebra,
    MetricLieAlgebra,
    ce_differential,
    check_jacobi,
    koszul_connection,
    ricci_tensor,
    riemann_curvature,
)
from .product_hermitian import (
    HermitianParams,
    ProductHermitian,
    build_product,
    codifferential_J,
    harmonicity_defect,
    nabla_J,
    p_tensor,
    product_levi_civita,
    rough_laplacian_J,
)
from .sasaki import (
    EtaEinsteinConstants,
    SasakiStructure,
    catalog,
    characteristic_connection,
    d_homothety,
    eta_einstein_constants,
    transverse_connection,
    verify_sasakian,
)
from .scalars import EXACT, FLOAT, QuadraticNumber
from .solvers import CytSolution, cyt_normalization, cyt_solve, ric_b_zero_solve, se_product_params
from .tensors import contract_pair

__version__ = "0.1.0"

__all__ = [
    "BismutAnalysis",
    "CytSolution",
    "EXACT",
    "EtaEinsteinConstants",
    "ExteriorForm",
    "FLOAT",
    "HermitianClassReport",
    "HermitianParams",
    "LieAlgebra",
    "MetricLieAlgebra",
    "NoSolutionError",
    "ProductHermitian",
    "QuadraticNumber",
    "SasakiStructure",
    "SasprodError",
    "ValidationError",
    "analyze_bismut",
    "bismut_connection",
    "bismut_curvature",
    "bismut_torsion",
    "build_product",
    "catalog",
    "ce_differential",
    "characteristic_connection",
    "check_jacobi",
    "classify",
    "codifferential_J",
    "contract_pair",
    "cyt_normalization",
    "cyt_solve",
    "d_c",
    "d_homothety",
    "eta_einstein_constants",
    "eval_form",
    "harmonicity_defect",
    "j_on_forms",
    "kahler_like_check",
    "koszul_connection",
    "lambda_omega",
    "lee_form",
    "nabla_J",
    "p_tensor",
    "parallel_torsion_check",
    "product_levi_civita",
    "rho_bismut",
    "ric_b_zero_solve",
    "ricci_bismut",
    "ricci_tensor",
    "riemann_curvature",
    "rough_laplacian_J",
    "se_product_params",
    "static_check",
    "transverse_connection",
    "verify_sasakian",
    "wedge",
]
