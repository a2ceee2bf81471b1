"""End-to-end acceptance checks.

Each check prints one ``criterion N: PASS|FAIL`` line (also collected into the
pytest terminal summary).  Run directly with ``python tests/test_acceptance.py``
for the lines alone.
"""

from fractions import Fraction
from itertools import product as pairs

import pytest

from conftest import ACCEPTANCE_LINES, factor, product, random_rationals
from sasprod.bismut import (
    bismut_connection,
    bismut_curvature,
    kahler_like_check,
    parallel_torsion_check,
    rho_bismut,
    ricci_bismut,
    torsion_codifferential,
    two_route_agreement,
)
from sasprod.errors import NoSolutionError
from sasprod.forms import power, wedge_all
from sasprod.hermitian_classes import algebraic_criteria, classify, k_gauduchon_form, matsuo_expression
from sasprod.identities import (
    bismut_identities,
    characteristic_identities,
    failures,
    product_connection_identities,
    product_curvature_identities,
    sasakian_identities,
    transverse_identities,
)
from sasprod.product_hermitian import (
    MAX_DIMENSION,
    codifferential_J,
    derivative_of_J_along,
    harmonicity_defect,
    wood_residual,
)
from sasprod.sasaki import catalog, d_homothety, eta_einstein_constants, verify_sasakian
from sasprod.scalars import binomial, vanishes
from sasprod.solvers import cyt_solve, se_product_params

F = Fraction
CATALOG = ["su2", "h3", "sl2r", "h5", "h7", "abelian1"]
HARMONIC_GRID = [(x, y) for x in ("su2", "h3", "sl2r", "h5") for y in ("su2", "h3")]


def _catalog_products():
    return [
        (x, y) for x, y in pairs(CATALOG, CATALOG) if factor(x).dim + factor(y).dim <= MAX_DIMENSION
    ]


def _harmonic_products():
    for seed, names in enumerate(HARMONIC_GRID):
        for a, b in random_rationals(100 + seed, 5):
            yield product(*names, a, b)


# ------------------------------------------------------------------ checks

def check_table_constants():
    expected = {"su2": 2, "h3": -2, "sl2r": -4}
    bad = []
    for name, lam in expected.items():
        s = factor(name)
        if not verify_sasakian(s).sasakian or eta_einstein_constants(s).lam != lam:
            bad.append(name)
    return not bad, f"3 algebras, mismatches: {bad or 'none'}"


def check_heisenberg_family():
    bad = []
    for n in (1, 2, 3):
        s = catalog("heisenberg", n=n)
        if s.dim != 2 * n + 1 or not verify_sasakian(s).sasakian or eta_einstein_constants(s).lam != -2:
            bad.append(n)
    return not bad, f"n = 1, 2, 3, mismatches: {bad or 'none'}"


def check_harmonicity_and_wood():
    count, bad = 0, []
    for p in _harmonic_products():
        count += 1
        result = harmonicity_defect(p)
        if not (result.harmonic and vanishes(result.defect) and vanishes(wood_residual(p))):
            bad.append((p.first.name, p.second.name, p.a, p.b))
    return not bad, f"{count} structures, failures: {len(bad)}"


def check_codifferential_of_J():
    count, bad = 0, []
    for p in _harmonic_products():
        count += 1
        delta = codifferential_J(p)
        expected = 2 * p.n1 * p.xi1 + 2 * p.n2 * p.xi2
        if not ((delta == expected).all() and vanishes(derivative_of_J_along(p, delta))):
            bad.append((p.first.name, p.second.name, p.a, p.b))
    return not bad, f"{count} structures, failures: {len(bad)}"


CLASS_PRODUCTS = [
    ("su2", "su2"),
    ("h3", "h3"),
    ("h3", "su2"),
    ("sl2r", "h3"),
    ("h5", "su2"),
    ("h3", "h5"),
    ("abelian1", "su2"),
    ("h5", "abelian1"),
    ("abelian1", "abelian1"),
]


def _class_grid(seed):
    grid = random_rationals(seed, 16)
    # points on the special loci, so both outcomes of SKT and astheno-Kahler occur
    return grid + [(F(0), F(1)), (F(0), F(-3, 2)), (F(-1, 2), F(2)), (F(-2, 5), F(4, 5))]


def _stated_flags(p):
    """Class predictions written out from the dimensions and parameters alone."""
    n1, n2, n = p.n1, p.n2, p.n
    one_trivial = (n1 == 0) != (n2 == 0)
    matsuo_zero = n1 * (n1 - 1) + 2 * p.a * n1 * n2 + n2 * (n2 - 1) * (p.a ** 2 + p.b ** 2) == 0
    return {
        "balanced": n1 + n2 == 0,
        "lck": one_trivial if n1 + n2 else None,
        "skt": n <= 2 or (n1 == 1 and n2 == 1 and p.a == 0),
        "astheno_kahler": matsuo_zero if n >= 3 else None,
        "gauduchon": True if n >= 2 else None,
    }


def check_classification():
    count, disagreements = 0, []
    for seed, names in enumerate(CLASS_PRODUCTS):
        for a, b in _class_grid(200 + seed):
            p = product(*names, a, b)
            count += 1
            report = classify(p)
            flags = report.flags()
            criteria = algebraic_criteria(p)
            stated = _stated_flags(p)
            same = all(flags[k] == criteria[k] for k in flags) and report.k_gauduchon == criteria["k_gauduchon"]
            same = same and all(flags[k] == v for k, v in stated.items())
            same = same and all(v is True for k, v in report.k_gauduchon.items() if k == p.n - 1)
            if p.n >= 3:
                same = same and (matsuo_expression(p) == 0) == flags["astheno_kahler"]
            if not same:
                disagreements.append((names, a, b))
    return not disagreements, f"{count} structures over {len(CLASS_PRODUCTS)} products, disagreements: {len(disagreements)}"


def check_k_gauduchon_certificate():
    a, b = F(1, 3), F(-2)
    p = product("h5", "su2", a, b)
    n, n1 = p.n, p.n1
    c = binomial(n - 3, n1 - 2) + 2 * a * binomial(n - 3, n1 - 1) + (a * a + b * b) * binomial(n - 3, n1)
    volume = wedge_all(power(p.Phi1, p.n1), power(p.Phi2, p.n2), p.eta1_form, p.eta2_form)
    ok = c == 1 + 2 * a
    for k in (2, 3):
        ok = ok and k_gauduchon_form(p, k).equals(volume.scale(4 * b * k * (k - n + 1) * c))
    return ok, f"h5 x su2 at (1/3, -2), k = 2, 3, C = {c}"


def check_two_route_agreement():
    count, bad = 0, []
    for seed, names in enumerate(_catalog_products()):
        for a, b in random_rationals(300 + seed, 10):
            count += 1
            if two_route_agreement(product(*names, a, b)) != {"ricci": True, "rho": True}:
                bad.append((names, a, b))
    return not bad, f"{count} structures over {len(_catalog_products())} products, disagreements: {len(bad)}"


CYT_EXAMPLES = [
    ("h3", None, "su2", None, F(-1), F(1)),
    ("sl2r", None, "su2", None, F(-3, 2), F(1, 2)),
    ("su2", F(2), "h3", None, F(-1, 2), F(1, 2)),
    ("su2", F(2), "sl2r", F(8, 3), F(-1, 2), F(1, 4)),
    ("h5", None, "su2", None, F(-2), F(1)),
    ("h7", None, "su2", None, F(-3), F(1)),
]


def _cyt_product(name1, s1, name2, s2, a, b):
    return product(name1, name2, a, b, "exact", s1, s2)


def check_cyt_examples():
    bad = [ex for ex in CYT_EXAMPLES if not vanishes(rho_bismut(_cyt_product(*ex)))]
    return not bad, f"{len(CYT_EXAMPLES)} structures, non-zero rho: {len(bad)}"


def check_bismut_flat():
    p = product("su2", "su2", F(0), F(1))
    q = product("su2", "su2", F(3, 5), F(4, 5))
    ok = vanishes(bismut_connection(p)) and vanishes(bismut_curvature(p))
    ok = ok and vanishes(ricci_bismut(q)) and not vanishes(rho_bismut(q))
    return bool(ok), "su2 x su2 at (0, 1) and (3/5, 4/5)"


KAHLER_LIKE_PRODUCTS = [("h3", "h3"), ("su2", "su2"), ("sl2r", "h3"), ("abelian1", "su2"), ("h5", "su2")]


def check_torsion_and_kahler_like():
    tested = list(_harmonic_products()) + [_cyt_product(*ex) for ex in CYT_EXAMPLES]
    torsion_bad = [p for p in tested if not (parallel_torsion_check(p) and vanishes(torsion_codifferential(p)))]
    kl_bad, kl_count = [], 0
    for seed, names in enumerate(KAHLER_LIKE_PRODUCTS):
        grid = random_rationals(400 + seed, 6) + [(F(0), b) for b in (F(1), F(-2), F(1, 3), F(5, 2))]
        for a, b in grid:
            p = product(*names, a, b)
            kl_count += 1
            if kahler_like_check(p) != classify(p).skt:
                kl_bad.append((names, a, b))
    ok = not torsion_bad and not kl_bad
    detail = f"torsion on {len(tested)} structures ({len(torsion_bad)} failures); "
    return ok, detail + f"Kahler-like vs SKT on {kl_count} structures ({len(kl_bad)} disagreements)"


def check_solver_round_trips():
    bad = []
    for name1, s1, name2, s2, a, b in CYT_EXAMPLES:
        f1, f2 = factor(name1, s1), factor(name2, s2)
        lam1, lam2 = eta_einstein_constants(f1).lam, eta_einstein_constants(f2).lam
        (sol,) = cyt_solve(lam1, f1.n, lam2, f2.n)
        if (sol.a, sol.b) != (a, b):
            bad.append((name1, name2))
    se = se_product_params(1, 1)
    if (se.a, se.b_squared) != (0, 1):
        bad.append("se(1,1)")
    for lam1, lam2 in [(-4, -2), (-3, -5), (F(-5, 2), F(-9, 4))]:
        try:
            cyt_solve(lam1, 1, lam2, 1)
            bad.append(("case iii", lam1, lam2))
        except NoSolutionError:
            pass
    if eta_einstein_constants(d_homothety(catalog("sl2r"), F(8, 3))).lam != F(-11, 4):
        bad.append("homothety")
    return not bad, f"{len(CYT_EXAMPLES)} pairs, 3 case-(iii) inputs, failures: {bad or 'none'}"


STRUCTURE_SUITE_PRODUCTS = [
    (x, y) for x, y in pairs(["su2", "h3", "sl2r", "h5", "abelian1"], repeat=2) if (x, y) != ("h5", "h5")
]


def check_identity_suites():
    families, bad = 0, []
    for name in CATALOG:
        s = factor(name)
        residuals = sasakian_identities(s) + characteristic_identities(s) + transverse_identities(s)
        families += len(residuals)
        bad += [f"{name}:{r}" for r in failures(residuals)]
    for names in STRUCTURE_SUITE_PRODUCTS:
        p = product(*names, F(-2, 3), F(3, 2))
        residuals = product_connection_identities(p) + product_curvature_identities(p) + bismut_identities(p)
        families += len(residuals)
        bad += [f"{names}:{r}" for r in failures(residuals)]
    return not bad, f"{families} residual families, failing: {bad or 'none'}"


CRITERIA = [
    (1, "three-dimensional catalog constants", check_table_constants),
    (2, "Heisenberg family constants", check_heisenberg_family),
    (3, "harmonic J and Wood identity", check_harmonicity_and_wood),
    (4, "codifferential of J", check_codifferential_of_J),
    (5, "Hermitian classification cross-check", check_classification),
    (6, "k-Gauduchon certificate", check_k_gauduchon_certificate),
    (7, "Bismut Ricci two-route agreement", check_two_route_agreement),
    (8, "CYT examples", check_cyt_examples),
    (9, "Bismut-flat structure", check_bismut_flat),
    (10, "parallel, coclosed torsion; Kahler-like iff SKT", check_torsion_and_kahler_like),
    (11, "solver round-trips", check_solver_round_trips),
    (12, "structural identity suites", check_identity_suites),
]


def _line(number, title, ok, detail):
    return f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} ({detail})"


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[c[2].__name__ for c in CRITERIA])
def test_criterion(number, title, check):
    ok, detail = check()
    line = _line(number, title, ok, detail)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [(n, t, *c()) for n, t, c in CRITERIA]
    for n, t, ok, detail in results:
        print(_line(n, t, ok, detail))
    raise SystemExit(0 if all(r[2] for r in results) else 1)
