"""JSON documents for Sasakian Lie algebras and JSON-ready conversion of results.

An algebra document looks like::

    {
      "name": "h3",
      "dim": 3,
      "labels": ["e1", "e2", "e3"],
      "brackets": [{"i": 1, "j": 2, "coefficients": {"3": "2"}}],
      "metric": [["1", "0", "0"], ...],          # optional, identity by default
      "structure": {"xi": ["0", "0", "1"], "eta": ["0", "0", "1"],
                    "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]]}
    }

Indices are 1-based, each bracket entry has ``i < j``, and every number is an
exact rational string ``"p/q"`` (plain integers are accepted too).  Column
``j`` of ``phi`` is the image of the ``j``-th basis vector.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .forms import ExteriorForm
from .lie_metric import LieAlgebra, MetricLieAlgebra, check_jacobi
from .sasaki import SasakiStructure, catalog, is_catalog_name
from .scalars import EXACT, QuadraticNumber, format_scalar, is_float_scalar, parse_rational


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(f"{where}: expected an exact rational string, got {value!r}")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def _index(value, dim: int, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= dim:
        raise ValidationError(f"{where}: index {value!r} outside 1..{dim}")
    return value - 1


def _vector(values, dim: int, where: str) -> list[Fraction]:
    if not isinstance(values, list) or len(values) != dim:
        raise ValidationError(f"{where}: expected a list of {dim} rationals")
    return [_rational(v, f"{where}[{k + 1}]") for k, v in enumerate(values)]


def _matrix(rows, dim: int, where: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim:
        raise ValidationError(f"{where}: expected a {dim}x{dim} matrix")
    out = np.empty((dim, dim), dtype=object)
    for r, row in enumerate(rows):
        out[r] = _vector(row, dim, f"{where}[{r + 1}]")
    return out


def structure_from_document(doc: dict, backend: str = EXACT) -> SasakiStructure:
    """Parse and check an algebra document (shape, rationals, Jacobi identity).

    The Sasakian axioms are not checked here; see ``verify_sasakian``.
    """
    if not isinstance(doc, dict):
        raise ValidationError("algebra document must be a JSON object")
    for key in ("dim", "brackets", "structure"):
        if key not in doc:
            raise ValidationError(f"algebra document lacks the field {key!r}")
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"dim must be a positive integer, got {dim!r}")
    name = str(doc.get("name", ""))
    brackets: dict = {}
    for pos, entry in enumerate(doc["brackets"]):
        where = f"brackets[{pos + 1}]"
        if not isinstance(entry, dict) or not {"i", "j", "coefficients"} <= entry.keys():
            raise ValidationError(f"{where}: needs fields i, j, coefficients")
        i, j = _index(entry["i"], dim, where), _index(entry["j"], dim, where)
        if i >= j:
            raise ValidationError(f"{where}: need i < j, got i={i + 1}, j={j + 1}")
        if (i, j) in brackets:
            raise ValidationError(f"{where}: bracket [{i + 1}, {j + 1}] given twice")
        image = {}
        for k, coeff in entry["coefficients"].items():
            try:
                k_int = int(k)
            except ValueError:
                raise ValidationError(f"{where}: basis index {k!r} is not an integer") from None
            image[_index(k_int, dim, where)] = _rational(coeff, f"{where}.coefficients[{k}]")
        brackets[(i, j)] = image
    labels = tuple(doc.get("labels") or ())
    algebra = LieAlgebra.from_brackets(dim, brackets, EXACT, labels, name)
    ok, triple = check_jacobi(algebra)
    if not ok:
        i, j, k = (t + 1 for t in triple)
        raise ValidationError(f"Jacobi identity fails on (b{i}, b{j}, b{k})")
    metric = _matrix(doc["metric"], dim, "metric") if doc.get("metric") is not None else None
    st = doc["structure"]
    if not isinstance(st, dict) or not {"xi", "eta", "phi"} <= st.keys():
        raise ValidationError("structure needs fields xi, eta, phi")
    out = SasakiStructure(
        MetricLieAlgebra(algebra, metric),
        _matrix(st["phi"], dim, "structure.phi"),
        _vector(st["xi"], dim, "structure.xi"),
        _vector(st["eta"], dim, "structure.eta"),
        name,
    )
    return out if backend == EXACT else out.with_backend(backend)


def _exact_string(x) -> str:
    if is_float_scalar(x):
        raise ValidationError("only exact structures can be written as algebra documents")
    return format_scalar(x)


def document_from_structure(structure: SasakiStructure) -> dict:
    """Inverse of :func:`structure_from_document` for exact structures."""
    s = structure
    c = s.structure
    dim = s.dim
    brackets = []
    for i in range(dim):
        for j in range(i + 1, dim):
            coeffs = {str(k + 1): _exact_string(c[i, j, k]) for k in range(dim) if c[i, j, k] != 0}
            if coeffs:
                brackets.append({"i": i + 1, "j": j + 1, "coefficients": coeffs})
    return {
        "name": s.name,
        "dim": dim,
        "labels": list(s.algebra.algebra.labels),
        "brackets": brackets,
        "metric": [[_exact_string(v) for v in row] for row in s.metric],
        "structure": {
            "xi": [_exact_string(v) for v in s.xi],
            "eta": [_exact_string(v) for v in s.eta],
            "phi": [[_exact_string(v) for v in row] for row in s.phi],
        },
    }


def load_document(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def resolve_factor(spec: str, backend: str = EXACT) -> SasakiStructure:
    """A catalog name, or else the path of an algebra document."""
    if is_catalog_name(spec):
        return catalog(spec, backend)
    if not Path(spec).exists():
        raise ValidationError(f"{spec!r} is neither a catalog name nor an existing file")
    return structure_from_document(load_document(spec), backend)


# ------------------------------------------------------------ JSON values

def scalar_json(x):
    """Exact scalars become strings, floats stay numbers."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if is_float_scalar(x):
        return float(x)
    if isinstance(x, (int, np.integer, Fraction, QuadraticNumber)):
        return format_scalar(x)
    return x


def array_json(arr) -> list:
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return scalar_json(arr.item())
    return [array_json(sub) for sub in arr]


def form_json(alpha: ExteriorForm) -> dict:
    """Non-zero coefficients keyed by 1-based index strings such as ``"1,2"``."""
    items = sorted(alpha.coeffs.items())
    return {
        "degree": alpha.degree,
        "coefficients": {",".join(str(i + 1) for i in key): scalar_json(v) for key, v in items if v != 0},
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)
