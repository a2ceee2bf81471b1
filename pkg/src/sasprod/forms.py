"""Sparse exterior forms on a finite-dimensional real vector space.

A k-form is stored as a map from strictly increasing index tuples to
coefficients, ``alpha = sum_I alpha_I e^I``. Evaluation uses the determinant
convention, so ``(e^1 ^ e^2)(e_1, e_2) = 1`` and the exterior derivative
carries no ``1/(k+1)`` factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Mapping

import numpy as np

from .scalars import det, is_float_scalar, max_abs, vanishes


def _sort_sign(indices: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``indices`` (0 if an index repeats)."""
    if len(set(indices)) != len(indices):
        return 0, indices
    inversions = sum(
        1 for i in range(len(indices)) for j in range(i + 1, len(indices)) if indices[i] > indices[j]
    )
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


@dataclass(frozen=True)
class ExteriorForm:
    degree: int
    dim: int
    coeffs: Mapping[tuple[int, ...], object] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree:
            raise ValueError(f"negative degree {self.degree}")
        clean = {}
        for key, value in self.coeffs.items():
            key = tuple(int(k) for k in key)
            if len(key) != self.degree:
                raise ValueError(f"key {key} does not have degree {self.degree}")
            if any(b <= a for a, b in zip(key, key[1:])):
                raise ValueError(f"key {key} is not strictly increasing")
            if key and not (0 <= key[0] and key[-1] < self.dim):
                raise ValueError(f"key {key} out of range for dimension {self.dim}")
            if value != 0:
                clean[key] = value
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def zero(cls, degree: int, dim: int) -> "ExteriorForm":
        return cls(degree, dim, {})

    @classmethod
    def constant(cls, value, dim: int) -> "ExteriorForm":
        return cls(0, dim, {(): value})

    @classmethod
    def covector(cls, components, dim: int | None = None) -> "ExteriorForm":
        """1-form with the given components ``alpha(e_i)``."""
        comps = list(components)
        n = len(comps) if dim is None else dim
        return cls(1, n, {(i,): c for i, c in enumerate(comps)})

    @classmethod
    def from_unsorted(cls, degree: int, dim: int, terms) -> "ExteriorForm":
        """Build from ``(indices, coefficient)`` pairs, reordering with signs."""
        acc: dict = {}
        for idx, value in terms:
            sign, key = _sort_sign(tuple(idx))
            if sign == 0:
                continue
            acc[key] = acc.get(key, 0) + sign * value
        return cls(degree, dim, acc)

    @classmethod
    def from_tensor(cls, tensor: np.ndarray) -> "ExteriorForm":
        """Form whose values on basis tuples are the entries of an antisymmetric array."""
        degree = tensor.ndim
        dim = tensor.shape[0] if degree else 0
        coeffs = {key: tensor[key] for key in combinations(range(dim), degree)}
        return cls(degree, dim, coeffs)

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), 0)

    def _check(self, other: "ExteriorForm"):
        if not isinstance(other, ExteriorForm):
            raise TypeError(f"expected ExteriorForm, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "ExteriorForm") -> "ExteriorForm":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        acc = dict(self.coeffs)
        for key, value in other.coeffs.items():
            acc[key] = acc.get(key, 0) + value
        return ExteriorForm(self.degree, self.dim, acc)

    def __neg__(self) -> "ExteriorForm":
        return ExteriorForm(self.degree, self.dim, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "ExteriorForm") -> "ExteriorForm":
        return self + (-other)

    def scale(self, factor) -> "ExteriorForm":
        return ExteriorForm(self.degree, self.dim, {k: factor * v for k, v in self.coeffs.items()})

    def __mul__(self, factor):
        if isinstance(factor, ExteriorForm):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def __xor__(self, other: "ExteriorForm") -> "ExteriorForm":
        return wedge(self, other)

    def is_zero(self, *operands) -> bool:
        return all(vanishes(v, self, *operands) for v in self.coeffs.values())

    def equals(self, other: "ExteriorForm") -> bool:
        """Coefficientwise equality (exact, or at the float tolerance)."""
        self._check(other)
        if other.degree != self.degree:
            return False
        diff = self - other
        return all(vanishes(v, self, other) for v in diff.coeffs.values())

    def to_tensor(self) -> np.ndarray:
        """Dense antisymmetric array of values on basis tuples."""
        floaty = any(is_float_scalar(v) for v in self.coeffs.values())
        shape = (self.dim,) * self.degree
        out = np.zeros(shape, dtype=float if floaty else object)
        if not floaty:
            out[...] = 0
        for key, value in self.coeffs.items():
            for perm in _permutations_with_sign(key):
                sign, idx = perm
                out[idx] = sign * value
        return out

    def max_abs(self) -> float:
        return max_abs(*self.coeffs.values())

    def __repr__(self):
        terms = ", ".join(f"{k}: {v}" for k, v in sorted(self.coeffs.items()))
        return f"ExteriorForm(degree={self.degree}, dim={self.dim}, {{{terms}}})"


def _permutations_with_sign(key):
    for perm in permutations(range(len(key))):
        sign, _ = _sort_sign(perm)
        yield sign, tuple(key[p] for p in perm)


def wedge(alpha: ExteriorForm, beta: ExteriorForm) -> ExteriorForm:
    """Graded-antisymmetric product; the zero form when the degree exceeds the dimension."""
    alpha._check(beta)
    degree = alpha.degree + beta.degree
    acc: dict = {}
    if degree <= alpha.dim:
        for ka, va in alpha.coeffs.items():
            sa = set(ka)
            for kb, vb in beta.coeffs.items():
                if sa.intersection(kb):
                    continue
                # sign of merging two sorted runs = parity of cross inversions
                inv = sum(1 for x in ka for y in kb if x > y)
                key = tuple(sorted(ka + kb))
                term = va * vb
                acc[key] = acc.get(key, 0) + (-term if inv % 2 else term)
    return ExteriorForm(degree, alpha.dim, acc)


def wedge_all(*forms: ExteriorForm) -> ExteriorForm:
    result = forms[0]
    for f in forms[1:]:
        result = wedge(result, f)
    return result


def power(alpha: ExteriorForm, k: int, cache: dict | None = None) -> ExteriorForm:
    """``alpha^k`` by repeated wedge; ``cache`` maps exponent -> form when given."""
    if k < 0:
        raise ValueError("negative exponent")
    if cache is not None and k in cache:
        return cache[k]
    if k == 0:
        one = 1.0 if any(is_float_scalar(v) for v in alpha.coeffs.values()) else 1
        result = ExteriorForm.constant(one, alpha.dim)
    else:
        result = wedge(power(alpha, k - 1, cache), alpha)
    if cache is not None:
        cache[k] = result
    return result


def eval_form(alpha: ExteriorForm, vectors) -> object:
    """Full antisymmetric multilinear evaluation on a list of coordinate vectors."""
    vectors = [np.asarray(v) for v in vectors]
    if len(vectors) != alpha.degree:
        raise ValueError(f"{alpha.degree}-form evaluated on {len(vectors)} vectors")
    if alpha.degree == 0:
        return alpha[()]
    for v in vectors:
        if v.shape != (alpha.dim,):
            raise ValueError(f"vector of shape {v.shape} in dimension {alpha.dim}")
    cols = np.stack(vectors, axis=1)
    if cols.dtype != object and cols.dtype.kind != "f":
        cols = cols.astype(object)
    total = 0
    for key, value in alpha.coeffs.items():
        total = total + value * det(cols[list(key), :])
    return total


def pullback(alpha: ExteriorForm, matrix: np.ndarray) -> ExteriorForm:
    """``(A* alpha)(v_1..v_k) = alpha(A v_1, ..., A v_k)`` for an endomorphism ``A``.

    ``matrix[:, j]`` is the image of the j-th basis vector. Computed as a wedge
    of pulled-back covectors, which stays cheap for sparse ``A``.
    """
    n = alpha.dim
    if matrix.shape != (n, n):
        raise ValueError(f"endomorphism of shape {matrix.shape} in dimension {n}")
    if alpha.degree == 0:
        return alpha
    rows = [
        ExteriorForm(1, n, {(j,): matrix[i, j] for j in range(n)}) for i in range(n)
    ]
    result = ExteriorForm.zero(alpha.degree, n)
    for key, value in alpha.coeffs.items():
        term = wedge_all(*(rows[i] for i in key))
        result = result + term.scale(value)
    return result


def interior(vector, alpha: ExteriorForm) -> ExteriorForm:
    """Contraction ``iota_v alpha`` into the first slot."""
    v = np.asarray(vector)
    if alpha.degree == 0:
        raise ValueError("interior product of a 0-form")
    acc: dict = {}
    for key, value in alpha.coeffs.items():
        for pos, idx in enumerate(key):
            if v[idx] == 0:
                continue
            rest = key[:pos] + key[pos + 1:]
            term = value * v[idx]
            acc[rest] = acc.get(rest, 0) + (-term if pos % 2 else term)
    return ExteriorForm(alpha.degree - 1, alpha.dim, acc)


def basis_covector(i: int, dim: int, one=1) -> ExteriorForm:
    return ExteriorForm(1, dim, {(i,): one})
