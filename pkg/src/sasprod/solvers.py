"""Inverse problems for the product structure: which ``(a, b)`` give CYT or ``Ric^B = 0``.

Inputs are eta-Einstein constants ``lam`` (with ``Ric = lam g + nu eta(x)eta``)
and half-dimensions ``n`` of the two factors. Exact rationals stay exact;
floats are accepted and processed in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NoSolutionError, ValidationError
from .sasaki import NEGATIVE, NULL, POSITIVE, EtaEinsteinConstants
from .scalars import QuadraticNumber, is_float_scalar, sqrt_rational

CASE_NULL_FIRST = "case (i): first factor null, lam1 = -2"
CASE_POSITIVE_FIRST = "case (ii): first factor positive, lam1 > -2"
CASE_NEGATIVE_FIRST = "case (iii): first factor negative, lam1 < -2"
CASE_FIRST_TRIVIAL = "first factor one-dimensional: only lam2 = 4(a^2+b^2)n2 - 2 constrains (a, b)"
CASE_SECOND_TRIVIAL = "second factor one-dimensional: CYT iff lam1 = 4n1 - 2, any (a, b)"
CASE_BOTH_TRIVIAL = "both factors one-dimensional: flat, any (a, b)"


def _number(x):
    if is_float_scalar(x):
        return float(x)
    if isinstance(x, QuadraticNumber):
        raise ValidationError("solver inputs must be rational or float")
    return Fraction(x)


def _root(value):
    return value ** 0.5 if isinstance(value, float) else sqrt_rational(value)


def _check_half_dimension(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValidationError(f"half-dimension must be a non-negative integer, got {n!r}")
    return int(n)


def lambda_class(lam) -> str:
    """Positive, null or negative according to ``lam`` versus ``-2``."""
    return EtaEinsteinConstants.classify(lam)


def case_note(lam1) -> str:
    return {NULL: CASE_NULL_FIRST, POSITIVE: CASE_POSITIVE_FIRST, NEGATIVE: CASE_NEGATIVE_FIRST}[lambda_class(lam1)]


@dataclass(frozen=True)
class CytSolution:
    """One admissible ``(a, b)``; ``b`` is the positive root of ``b_squared``."""

    a: object
    b_squared: object
    exact_b: object = None
    note: str = ""

    def __post_init__(self):
        if not self.b_squared > 0:
            raise ValidationError(f"b^2 must be positive, got {self.b_squared}")
        if self.exact_b is not None and self.exact_b * self.exact_b != self.b_squared:
            if not isinstance(self.exact_b, float):
                raise ValidationError("exact_b does not square to b_squared")

    @property
    def b(self):
        return self.exact_b if self.exact_b is not None else float(self.b_squared) ** 0.5


def _solution(a, b_squared, note: str) -> CytSolution:
    return CytSolution(a, b_squared, _root(b_squared), note)


def cyt_solve(lam1, n1, lam2, n2) -> list[CytSolution]:
    """Solve ``lam1 = 4(n1 + a n2) - 2`` and ``lam2 = 4(a n1 + (a^2+b^2) n2) - 2``.

    Raises :class:`NoSolutionError` when the forced ``b^2`` is not positive.
    With a one-dimensional factor only one equation survives; the returned
    solution is then the representative with ``a = 0`` (and ``b = 1`` when
    ``(a, b)`` is unconstrained).
    """
    lam1, lam2 = _number(lam1), _number(lam2)
    n1, n2 = _check_half_dimension(n1), _check_half_dimension(n2)
    one = 1.0 if isinstance(lam1, float) or isinstance(lam2, float) else Fraction(1)
    if n1 == 0 and n2 == 0:
        return [_solution(0 * one, one, CASE_BOTH_TRIVIAL)]
    if n2 == 0:
        if lam1 != 4 * n1 - 2 and not _close(lam1, 4 * n1 - 2):
            raise NoSolutionError(
                f"second factor is one-dimensional; CYT needs lam1 = {4 * n1 - 2}, got {lam1}",
                lam1,
                CASE_SECOND_TRIVIAL,
            )
        return [_solution(0 * one, one, CASE_SECOND_TRIVIAL)]
    if n1 == 0:
        radius2 = (lam2 + 2) / (4 * n2)
        if not radius2 > 0:
            raise NoSolutionError(f"a^2 + b^2 = {radius2} must be positive", radius2, CASE_FIRST_TRIVIAL)
        return [_solution(0 * one, radius2, CASE_FIRST_TRIVIAL + f"; circle a^2+b^2 = {radius2}")]

    note = case_note(lam1)
    a = (lam1 + 2 - 4 * n1) / (4 * n2)
    b_squared = (lam2 + 2 - 4 * a * n1) / (4 * n2) - a * a
    if not b_squared > 0 or _close(b_squared, 0):
        raise NoSolutionError(f"no CYT structure: forced b^2 = {b_squared} is not positive", b_squared, note)
    return [_solution(a, b_squared, note)]


def _close(x, y) -> bool:
    if isinstance(x, float) or isinstance(y, float):
        from .scalars import epsilon

        return abs(float(x) - float(y)) <= epsilon()
    return False


@dataclass(frozen=True)
class RicciFlatCircle:
    """``Ric^B = 0`` exactly on the circle ``a^2 + b^2 = radius_squared`` (with ``b != 0``)."""

    radius_squared: object

    def contains(self, a, b) -> bool:
        return b != 0 and a * a + b * b == self.radius_squared

    def representative(self) -> CytSolution:
        """The point ``a = 0, b > 0``."""
        return _solution(0 * self.radius_squared, self.radius_squared, "a = 0 point of the circle")


def ric_b_zero_solve(lam1, lam2) -> RicciFlatCircle:
    """``Ric^B = 0`` needs ``lam1 = 2`` and ``lam2 = 2(2a^2 + 2b^2 - 1)``."""
    lam1, lam2 = _number(lam1), _number(lam2)
    if lam1 != 2 and not _close(lam1, 2):
        raise NoSolutionError(f"Ric^B = 0 needs lam1 = 2, got {lam1}", lam1, "first factor")
    radius2 = (lam2 + 2) / 4
    if not radius2 > 0 or _close(radius2, 0):
        raise NoSolutionError(f"Ric^B = 0 needs lam2 > -2 since b != 0, got {lam2}", lam2, "second factor")
    return RicciFlatCircle(radius2)


def se_product_params(n1: int, n2: int) -> CytSolution:
    """CYT parameters for two Sasaki-Einstein factors (``lam_i = 2 n_i``)."""
    n1, n2 = _check_half_dimension(n1), _check_half_dimension(n2)
    if n1 < 1 or n2 < 1:
        raise ValidationError("both factors must have dimension at least 3")
    a = Fraction(-(n1 - 1), 2 * n2)
    b_squared = Fraction((n1 - 1) * (n1 + 1) + 2 * n2 * (n2 + 1), 4 * n2 * n2)
    return _solution(a, b_squared, "Sasaki-Einstein factors")


@dataclass(frozen=True)
class CytNormalization:
    """D-homothety factors ``s1, s2`` bringing the factors to constants where ``solution`` is CYT."""

    s1: object
    s2: object
    lam1: object
    lam2: object
    solution: CytSolution


def _scale_to(lam, target):
    """``s`` with ``homothety_lambda(lam, s) = target``; null factors are fixed by every ``s``, so ``s = 1``."""
    if lam == target:
        return lam - lam + 1
    return (lam + 2) / (target + 2)


def cyt_normalization(lam1, n1, lam2, n2) -> CytNormalization:
    """Rescale two eta-Einstein factors so that a CYT structure exists, when the classes allow it.

    Possible exactly when the first factor is positive, or the second one is.
    """
    lam1, lam2 = _number(lam1), _number(lam2)
    n1, n2 = _check_half_dimension(n1), _check_half_dimension(n2)
    if n1 < 1 or n2 < 1:
        raise ValidationError("both factors must have dimension at least 3")
    c1, c2 = lambda_class(lam1), lambda_class(lam2)
    note = case_note(lam1)
    if c1 != POSITIVE and c2 != POSITIVE:
        raise NoSolutionError(f"no CYT structure for a {c1} first factor and a {c2} second factor", (c1, c2), note)
    q = Fraction(n1, n2)
    if c1 == NULL:
        t1, t2 = lam1, lam2
    elif c1 == POSITIVE:
        t1 = Fraction(2 * n1 - 2)
        t2 = {NULL: lam2, POSITIVE: 3 * n1 * q - 2, NEGATIVE: -3 * n1 * q / 4 - 2}[c2]
    else:
        t1 = Fraction(-n1 - 2)
        t2 = 3 * n1 * q / 2 - 2
    s1, s2 = _scale_to(lam1, t1), _scale_to(lam2, t2)
    solution = cyt_solve(t1, n1, t2, n2)[0]
    return CytNormalization(s1, s2, t1, t2, solution)
