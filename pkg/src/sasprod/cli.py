"""Command-line interface: ``analyze``, ``solve``, ``sweep`` and ``catalog list``.

Exit codes: 0 on success, 2 on invalid input, 3 when a solver finds no solution.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from . import solvers
from .bismut import (
    analyze_bismut,
    bismut_connection,
    bismut_curvature,
    bismut_torsion,
    rho_bismut,
    ricci_bismut,
)
from .documents import array_json, document_from_structure, dumps, form_json, resolve_factor, scalar_json
from .errors import NoSolutionError, SasprodError, ValidationError
from .hermitian_classes import classify
from .product_hermitian import (
    build_product,
    codifferential_J,
    harmonicity_defect,
    p_tensor,
    rough_laplacian_J,
    wood_residual,
)
from .sasaki import CATALOG_NAMES, catalog, eta_einstein_constants, verify_sasakian
from .scalars import BACKENDS, EXACT, FLOAT, epsilon, parse_rational, vanishes

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_SOLUTION = 3

PREDICATE_ALIASES = {"astheno": "astheno_kahler", "ricb": "ric_b_zero", "kahler-like": "kahler_like"}
PREDICATES = (
    "kahler",
    "balanced",
    "lck",
    "vaisman",
    "skt",
    "astheno_kahler",
    "gauduchon",
    "harmonic",
    "ric_b_zero",
    "cyt",
    "parallel_torsion",
    "delta_torsion_zero",
    "kahler_like",
    "static",
)


def parse_parameter(text: str, backend: str):
    try:
        return parse_rational(text)
    except ValueError:
        if backend == FLOAT:
            try:
                return float(text)
            except ValueError:
                pass
        raise ValidationError(f"not a rational number: {text!r}") from None


# ------------------------------------------------------------------ analyze

def _factor_entry(spec: str, structure) -> dict:
    verdict = verify_sasakian(structure)
    consts = eta_einstein_constants(structure) if verdict.sasakian else None
    return {
        "input": spec,
        "name": structure.name,
        "dim": structure.dim,
        "sasakian": {
            "sasakian": verdict.sasakian,
            "almost_contact": verdict.almost_contact,
            "normal": verdict.normal,
            "contact_condition": verdict.contact_condition,
            "failures": list(verdict.failures),
        },
        "eta_einstein": None
        if consts is None
        else {"lambda": scalar_json(consts.lam), "nu": scalar_json(consts.nu), "class": consts.klass},
    }


def analysis_report(spec1: str, spec2: str, a, b, backend: str = EXACT, include_tensors: bool = False) -> dict:
    """Full analysis of the product structure as a JSON-ready dictionary."""
    exact1, exact2 = resolve_factor(spec1), resolve_factor(spec2)
    s1, s2 = exact1.with_backend(backend), exact2.with_backend(backend)
    factors = [_factor_entry(spec1, s1), _factor_entry(spec2, s2)]
    bad = [f for f in factors if not f["sasakian"]["sasakian"]]
    if bad:
        detail = "; ".join(f"{f['input']}: {', '.join(f['sasakian']['failures'])}" for f in bad)
        raise ValidationError(f"factor is not Sasakian ({detail})")
    product = build_product(s1, s2, a, b)
    classes = classify(product)
    bismut = analyze_bismut(product, skt=classes.skt)
    harmonic = harmonicity_defect(product)
    report = {
        "input": {
            "factors": [document_from_structure(exact1), document_from_structure(exact2)],
            "a": scalar_json(a),
            "b": scalar_json(b),
        },
        "backend": backend,
        "tolerance": epsilon() if backend == FLOAT else 0,
        "factors": factors,
        "dimension": {"real": product.dim, "complex": product.n, "n1": product.n1, "n2": product.n2},
        "hermitian_classes": {
            **classes.flags(),
            "k_gauduchon": {str(k): v for k, v in classes.k_gauduchon.items()},
            "certificate_C": None if classes.certificate_C is None else scalar_json(classes.certificate_C),
            "lee_form": None if classes.lee_form is None else form_json(classes.lee_form),
        },
        "harmonicity": {
            "harmonic": harmonic.harmonic,
            "wood_identity": bool(vanishes(wood_residual(product), product.J)),
            "codifferential_J": array_json(codifferential_J(product)),
        },
        "bismut": {
            **bismut.flags(),
            "static_applicable": bismut.static.applicable,
            "static_alpha": None if bismut.static.alpha is None else scalar_json(bismut.static.alpha),
            "torsion_form": form_json(bismut.torsion.form),
        },
    }
    if include_tensors:
        report["tensors"] = {
            "metric": array_json(product.metric),
            "J": array_json(product.J),
            "levi_civita": array_json(product.levi_civita),
            "curvature": array_json(product.curvature),
            "nabla_J": array_json(product.nabla_J),
            "rough_laplacian_J": array_json(rough_laplacian_J(product)),
            "P": array_json(p_tensor(product)),
            "bismut_connection": array_json(bismut_connection(product)),
            "bismut_torsion": array_json(bismut_torsion(product).tensor),
            "bismut_curvature": array_json(bismut_curvature(product)),
            "ricci_bismut": array_json(ricci_bismut(product)),
            "rho_bismut": array_json(rho_bismut(product)),
        }
    return report


def flag_values(report: dict) -> dict:
    out = {}
    out.update({k: report["hermitian_classes"][k] for k in PREDICATES if k in report["hermitian_classes"]})
    out["harmonic"] = report["harmonicity"]["harmonic"]
    out.update({k: report["bismut"][k] for k in PREDICATES if k in report["bismut"]})
    return out


# -------------------------------------------------------------------- solve

def _solution_json(sol: solvers.CytSolution) -> dict:
    return {
        "a": scalar_json(sol.a),
        "b_squared": scalar_json(sol.b_squared),
        "b": scalar_json(sol.b),
        "note": sol.note,
    }


def solve_document(mode: str, args: argparse.Namespace) -> dict:
    def need(*names):
        missing = [f"--{n.replace('_', '')}" for n in names if getattr(args, n) is None]
        if missing:
            raise ValidationError(f"solve {mode} needs {', '.join(missing)}")

    if mode == "cyt":
        need("l1", "n1", "l2", "n2")
        l1, l2 = parse_parameter(args.l1, EXACT), parse_parameter(args.l2, EXACT)
        doc = {"mode": mode, "input": {"l1": scalar_json(l1), "n1": args.n1, "l2": scalar_json(l2), "n2": args.n2}}
        if args.normalize:
            norm = solvers.cyt_normalization(l1, args.n1, l2, args.n2)
            doc.update(
                status="solved",
                normalization={
                    "s1": scalar_json(norm.s1),
                    "s2": scalar_json(norm.s2),
                    "l1": scalar_json(norm.lam1),
                    "l2": scalar_json(norm.lam2),
                },
                solutions=[_solution_json(norm.solution)],
            )
            return doc
        doc.update(status="solved", solutions=[_solution_json(s) for s in solvers.cyt_solve(l1, args.n1, l2, args.n2)])
        return doc
    if mode == "ricb":
        need("l1", "l2")
        l1, l2 = parse_parameter(args.l1, EXACT), parse_parameter(args.l2, EXACT)
        circle = solvers.ric_b_zero_solve(l1, l2)
        return {
            "mode": mode,
            "input": {"l1": scalar_json(l1), "l2": scalar_json(l2)},
            "status": "solved",
            "constraint": f"a^2+b^2 = {scalar_json(circle.radius_squared)}",
            "radius_squared": scalar_json(circle.radius_squared),
            "representative": _solution_json(circle.representative()),
        }
    need("n1", "n2")
    return {
        "mode": mode,
        "input": {"n1": args.n1, "n2": args.n2},
        "status": "solved",
        "solutions": [_solution_json(solvers.se_product_params(args.n1, args.n2))],
    }


# -------------------------------------------------------------------- sweep

def grid(lo, hi, step) -> list:
    if not step > 0:
        raise ValidationError(f"step must be positive, got {step}")
    if lo > hi:
        raise ValidationError(f"empty range [{lo}, {hi}]")
    out, x = [], lo
    while x <= hi:
        out.append(x)
        x = x + step
    return out


def _sweep_row(job) -> dict:
    spec1, spec2, a, b, backend = job
    report = analysis_report(spec1, spec2, a, b, backend)
    return {"a": scalar_json(a), "b": scalar_json(b), "flags": flag_values(report)}


def sweep_rows(spec1, spec2, a_values, b_values, backend=EXACT, predicate=None, only_matching=False, jobs=1) -> list:
    """Rows in lexicographic ``(a, b)`` order; ``b = 0`` is skipped."""
    if predicate is not None:
        predicate = PREDICATE_ALIASES.get(predicate, predicate)
        if predicate not in PREDICATES:
            raise ValidationError(f"unknown predicate {predicate!r}; known: {', '.join(PREDICATES)}")
    points = [(spec1, spec2, a, b, backend) for a in sorted(a_values) for b in sorted(b_values) if b != 0]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, points))
    else:
        rows = [_sweep_row(p) for p in points]
    if predicate is None:
        return rows
    for row in rows:
        row["match"] = row["flags"][predicate] is True
    return [r for r in rows if r["match"]] if only_matching else rows


# ------------------------------------------------------------------ output

def _is_array(value) -> bool:
    """A (nested) list of scalars, printed on one line."""
    if not isinstance(value, list):
        return not isinstance(value, dict)
    return all(_is_array(v) for v in value)


def _inline(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_inline(v) for v in value) + "]"
    return _text_scalar(value)


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, list) and value and _is_array(value):
                lines.append(f"{pad}{key}: {_inline(value)}")
            elif isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_text_scalar(value)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_text_scalar(item)}")
    else:
        lines.append(pad + _text_scalar(obj))
    return "\n".join(lines)


def _text_scalar(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value == [] or value == {}:
        return "none"
    return str(value)


def emit(obj, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write((dumps(obj) if fmt == "json" else render_text(obj)) + "\n")


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sasprod",
        description="Hermitian structures on products of Sasakian Lie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyse the structure (J_ab, g_ab) on a product")
    p.add_argument("factor1", help="catalog name or algebra JSON file")
    p.add_argument("factor2", help="catalog name or algebra JSON file")
    p.add_argument("--a", required=True, help="rational parameter a, e.g. -3/2")
    p.add_argument("--b", required=True, help="non-zero rational parameter b")
    p.add_argument("--backend", choices=BACKENDS, default=EXACT)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--include-tensors", action="store_true", help="add all component arrays to the report")

    p = sub.add_parser("solve", help="solve for (a, b) giving CYT or Ric^B = 0")
    p.add_argument("mode", choices=("cyt", "ricb", "se"))
    p.add_argument("--l1", help="eta-Einstein constant lambda of the first factor")
    p.add_argument("--l2", help="eta-Einstein constant lambda of the second factor")
    p.add_argument("--n1", type=int, help="first factor has dimension 2*n1+1")
    p.add_argument("--n2", type=int, help="second factor has dimension 2*n2+1")
    p.add_argument("--normalize", action="store_true", help="cyt: rescale the factors first if needed")
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("sweep", help="evaluate class flags over an (a, b) grid")
    p.add_argument("factor1")
    p.add_argument("factor2")
    p.add_argument("--a-range", nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--b-range", nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--step", required=True, help="grid spacing for both parameters")
    p.add_argument("--predicate", help=f"flag to evaluate per row ({', '.join(PREDICATES)})")
    p.add_argument("--only-matching", action="store_true", help="emit only rows where the predicate holds")
    p.add_argument("--backend", choices=BACKENDS, default=EXACT)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("catalog", help="built-in Sasakian Lie algebras")
    p.add_argument("action", choices=("list",))
    p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def _catalog_listing() -> list:
    rows = []
    for name in ("su2", "h3", "sl2r", "h5", "abelian1"):
        s = catalog(name)
        consts = eta_einstein_constants(s)
        rows.append(
            {
                "name": name,
                "dim": s.dim,
                "lambda": None if consts is None else scalar_json(consts.lam),
                "class": None if consts is None else consts.klass,
            }
        )
    return rows


def run(args: argparse.Namespace) -> int:
    if args.command == "analyze":
        a, b = parse_parameter(args.a, args.backend), parse_parameter(args.b, args.backend)
        if b == 0:
            raise ValidationError("b must be non-zero")
        emit(analysis_report(args.factor1, args.factor2, a, b, args.backend, args.include_tensors), args.format)
        return EXIT_OK
    if args.command == "solve":
        try:
            doc = solve_document(args.mode, args)
        except NoSolutionError as exc:
            emit(
                {
                    "mode": args.mode,
                    "status": "no_solution",
                    "message": str(exc),
                    "value": array_json(exc.value) if isinstance(exc.value, tuple) else scalar_json(exc.value),
                    "case": exc.case,
                },
                args.format,
            )
            return EXIT_NO_SOLUTION
        emit(doc, args.format)
        return EXIT_OK
    if args.command == "sweep":
        backend = args.backend
        step = parse_parameter(args.step, backend)
        a_vals = grid(*(parse_parameter(v, backend) for v in args.a_range), step)
        b_vals = grid(*(parse_parameter(v, backend) for v in args.b_range), step)
        rows = sweep_rows(
            args.factor1, args.factor2, a_vals, b_vals, backend, args.predicate, args.only_matching, max(1, args.jobs)
        )
        emit({"factors": [args.factor1, args.factor2], "predicate": args.predicate, "rows": rows}, args.format)
        return EXIT_OK
    emit({"catalog": _catalog_listing(), "names": list(CATALOG_NAMES)}, args.format)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except SasprodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
