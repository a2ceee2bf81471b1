"""Scalar backends: exact rationals, quadratic extensions Q(sqrt d), and floats.

Exact values live in numpy object arrays (``Fraction`` or
:class:`QuadraticNumber`); the float backend uses plain ``float64`` arrays.
Every zero test in the package goes through :func:`vanishes` so that the two
backends share one code path.
"""

from __future__ import annotations

import math
import os
import re
from fractions import Fraction
from numbers import Rational

import numpy as np

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

EPSILON_ENV = "SASPROD_EPSILON"
DEFAULT_EPSILON = 1e-9


def epsilon() -> float:
    """Float-backend zero tolerance, overridable through ``SASPROD_EPSILON``."""
    raw = os.environ.get(EPSILON_ENV)
    if not raw:
        return DEFAULT_EPSILON
    value = float(raw)
    if not value > 0:
        raise ValueError(f"{EPSILON_ENV} must be positive, got {raw!r}")
    return value


def _squarefree_split(m: int) -> tuple[int, int]:
    """Return (s, d) with m = s*s*d and d squarefree (m > 0)."""
    s, d = 1, 1
    k = 2
    while k * k <= m:
        while m % (k * k) == 0:
            m //= k * k
            s *= k
        if m % k == 0:
            m //= k
            d *= k
        k += 1
    return s, d * m


class QuadraticNumber:
    """An element ``rational + irrational*sqrt(radicand)`` of Q(sqrt d).

    The radicand is a squarefree integer > 1. Arithmetic with ints and
    Fractions is supported; results with a vanishing irrational part collapse
    back to ``Fraction``. Mixing two different radicands raises ``ValueError``.
    """

    __slots__ = ("rational", "irrational", "radicand")

    def __init__(self, rational, irrational, radicand: int):
        self.rational = Fraction(rational)
        self.irrational = Fraction(irrational)
        self.radicand = int(radicand)
        if self.radicand < 2 or _squarefree_split(self.radicand)[0] != 1:
            raise ValueError(f"radicand must be a squarefree integer > 1, got {radicand}")

    @staticmethod
    def _make(p: Fraction, q: Fraction, d: int):
        if q == 0:
            return p
        return QuadraticNumber(p, q, d)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.radicand != self.radicand:
                raise ValueError(
                    f"cannot mix Q(sqrt {self.radicand}) and Q(sqrt {other.radicand})"
                )
            return other.rational, other.irrational
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(self.rational + c[0], self.irrational + c[1], self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.rational, -self.irrational, self.radicand)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(self.rational - c[0], self.irrational - c[1], self.radicand)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(c[0] - self.rational, c[1] - self.irrational, self.radicand)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        p, q, d = self.rational, self.irrational, self.radicand
        return self._make(p * c[0] + q * c[1] * d, p * c[1] + q * c[0], d)

    __rmul__ = __mul__

    def _inverse(self):
        p, q, d = self.rational, self.irrational, self.radicand
        norm = p * p - q * q * d
        return QuadraticNumber(p / norm, -q / norm, d)

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if c[1] == 0:
            if c[0] == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt d)")
            return self._make(self.rational / c[0], self.irrational / c[0], self.radicand)
        return self * QuadraticNumber(c[0], c[1], self.radicand)._inverse()

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._inverse() * self._make(c[0], c[1], self.radicand)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return (1 / self) ** (-exponent)
        result = Fraction(1)
        for _ in range(exponent):
            result = result * self
        return result

    def sign(self) -> int:
        p, q, d = self.rational, self.irrational, self.radicand
        sp = (p > 0) - (p < 0)
        sq = (q > 0) - (q < 0)
        if sp == sq or sp == 0:
            return sq
        if sq == 0:
            return sp
        # opposite signs: compare magnitudes squared
        return sp if p * p > q * q * d else sq

    def _cmp(self, other) -> int | None:
        c = self._coerce(other)
        if c is None:
            return None
        diff = self._make(self.rational - c[0], self.irrational - c[1], self.radicand)
        if isinstance(diff, QuadraticNumber):
            return diff.sign()
        return (diff > 0) - (diff < 0)

    def __eq__(self, other):
        if isinstance(other, float):
            return float(self) == other
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        return hash((self.rational, self.irrational, self.radicand))

    def __bool__(self):
        return True  # irrational part is never zero after _make

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.rational) + float(self.irrational) * math.sqrt(self.radicand)

    def __repr__(self):
        return f"QuadraticNumber({self.rational}, {self.irrational}, {self.radicand})"

    def __str__(self):
        return format_scalar(self)


def sqrt_rational(x):
    """Exact square root of a non-negative rational: a Fraction or a QuadraticNumber."""
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"square root of negative rational {x}")
    if x == 0:
        return Fraction(0)
    # sqrt(p/q) = sqrt(p*q)/q
    m = x.numerator * x.denominator
    s, d = _squarefree_split(m)
    coeff = Fraction(s, x.denominator)
    if d == 1:
        return coeff
    return QuadraticNumber(0, coeff, d)


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or an integer string exactly. Ints and Fractions pass through."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string like '3/4', got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not an exact rational: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_scalar(x) -> str:
    """Canonical string form: ``p/q`` for rationals, ``p+q*sqrt(d)`` for Q(sqrt d)."""
    if isinstance(x, QuadraticNumber):
        head = "" if x.rational == 0 else f"{x.rational}"
        q = x.irrational
        if q == 1:
            tail = f"sqrt({x.radicand})"
        elif q == -1:
            tail = f"-sqrt({x.radicand})"
        else:
            tail = f"{q}*sqrt({x.radicand})"
        if head and not tail.startswith("-"):
            return f"{head}+{tail}"
        return head + tail
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(Fraction(x))


def to_backend(values, backend: str) -> np.ndarray:
    """Array of exact scalars (object dtype) or float64, per ``backend``."""
    if backend == FLOAT:
        return np.asarray(values, dtype=object).astype(float)
    if backend != EXACT:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        v = arr[idx]
        out[idx] = v if isinstance(v, QuadraticNumber) else Fraction(v)
    return out


def scalar_to_backend(x, backend: str):
    if backend == FLOAT:
        return float(x)
    if backend != EXACT:
        raise ValueError(f"unknown backend {backend!r}")
    return x if isinstance(x, QuadraticNumber) else Fraction(x)


def is_float_array(arr) -> bool:
    return isinstance(arr, np.ndarray) and arr.dtype.kind == "f"


def is_float_scalar(x) -> bool:
    return isinstance(x, (float, np.floating))


def max_abs(*items) -> float:
    """Largest absolute value over scalars, arrays and nested iterables of those."""
    best = 0.0
    for item in items:
        if isinstance(item, np.ndarray):
            if item.size:
                best = max(best, float(np.max(np.abs(item.astype(float)))))
        elif isinstance(item, (list, tuple)):
            best = max(best, max_abs(*item))
        elif hasattr(item, "coeffs"):
            best = max(best, max_abs(*item.coeffs.values()))
        elif item is not None:
            best = max(best, abs(float(item)))
    return best


def vanishes(value, *operands) -> bool:
    """Zero test shared by both backends.

    Exact values must be identically zero. Floats must satisfy
    ``|x| <= eps * (1 + scale)`` where ``scale`` is the largest absolute value
    among ``value`` and ``operands``.
    """
    if isinstance(value, np.ndarray):
        if value.dtype.kind == "f":
            scale = max_abs(value, *operands)
            return bool(np.all(np.abs(value) <= epsilon() * (1.0 + scale)))
        return all(v == 0 for v in value.flat)
    if is_float_scalar(value):
        scale = max_abs(value, *operands)
        return abs(value) <= epsilon() * (1.0 + scale)
    return value == 0


def agree(lhs, rhs) -> bool:
    """Exact equality, or float equality at the shared tolerance."""
    if isinstance(lhs, np.ndarray) or isinstance(rhs, np.ndarray):
        lhs_a = np.asarray(lhs)
        rhs_a = np.asarray(rhs)
        if lhs_a.shape != rhs_a.shape:
            raise ValueError(f"shape mismatch {lhs_a.shape} vs {rhs_a.shape}")
        if lhs_a.dtype.kind == "f" or rhs_a.dtype.kind == "f":
            return vanishes(lhs_a.astype(float) - rhs_a.astype(float), lhs_a, rhs_a)
        return all(x == y for x, y in zip(lhs_a.flat, rhs_a.flat))
    if is_float_scalar(lhs) or is_float_scalar(rhs):
        return vanishes(float(lhs) - float(rhs), lhs, rhs)
    return lhs == rhs


def positive(x) -> bool:
    """Strict positivity; floats must clear the zero tolerance."""
    if is_float_scalar(x):
        return x > epsilon()
    return x > 0


def binomial(n: int, k: int) -> int:
    """Binomial coefficient that is zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def det(matrix: np.ndarray):
    """Determinant by fraction-safe Gaussian elimination (any scalar field)."""
    m = np.array(matrix, dtype=matrix.dtype if matrix.dtype.kind == "f" else object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"determinant of non-square matrix {m.shape}")
    if n == 0:
        return Fraction(1) if m.dtype == object else 1.0
    if m.dtype.kind == "f":
        return float(np.linalg.det(m))
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r, col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[[col, pivot]] = m[[pivot, col]]
            sign = -sign
        p = m[col, col]
        result = result * p
        for r in range(col + 1, n):
            if m[r, col] != 0:
                f = m[r, col] / p
                m[r, col:] = m[r, col:] - f * m[col, col:]
    return result * sign


def inverse(matrix: np.ndarray) -> np.ndarray:
    """Matrix inverse by Gauss-Jordan elimination; exact for object arrays."""
    if matrix.dtype.kind == "f":
        return np.linalg.inv(matrix)
    n = matrix.shape[0]
    aug = np.empty((n, 2 * n), dtype=object)
    aug[:, :n] = matrix
    aug[:, n:] = to_backend(np.eye(n, dtype=int), EXACT)
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r, col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] = aug[col] / aug[col, col]
        for r in range(n):
            if r != col and aug[r, col] != 0:
                aug[r] = aug[r] - aug[r, col] * aug[col]
    return aug[:, n:].copy()


def leading_minors(matrix: np.ndarray) -> list:
    return [det(matrix[:k, :k]) for k in range(1, matrix.shape[0] + 1)]


def frozen(arr: np.ndarray) -> np.ndarray:
    """Mark an array read-only; shared geometric data is never mutated."""
    arr.flags.writeable = False
    return arr
