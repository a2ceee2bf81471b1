"""Dense tensor kernels on left-invariant frames.

Tensors are numpy arrays (object dtype for exact scalars, float64 otherwise)
indexed in the basis of the Lie algebra. Conventions used throughout:

* vectors ``v[k]``; endomorphisms ``A[k, j]`` with ``A[:, j] = A(b_j)``
* connections ``gamma[i, j, k]``: ``nabla_{b_i} b_j = sum_k gamma[i, j, k] b_k``
* curvature ``R[i, j, k, l]``: ``R(b_i, b_j) b_k = sum_l R[i, j, k, l] b_l``
* bilinear forms ``B[i, j] = B(b_i, b_j)``

Orthonormal-frame sums are realised as contractions with the inverse metric,
so exact arithmetic never needs square roots.
"""

from __future__ import annotations

import math
import weakref
from fractions import Fraction

import numpy as np

_INT64_SAFE = 2**62

# integer forms of read-only arrays, keyed by id and dropped when the array dies
_SCALED_CACHE: dict = {}


def zeros(shape, like: np.ndarray) -> np.ndarray:
    """Zero array matching the scalar backend of ``like``."""
    if like.dtype.kind == "f":
        return np.zeros(shape, dtype=float)
    out = np.empty(shape, dtype=object)
    out[...] = 0
    return out


def _scaled_integers(arr: np.ndarray):
    """``(ints, den, bound)`` with ``arr == ints / den``, or ``None`` for non-rational entries."""
    den = 1
    flat = arr.ravel()
    for v in flat:
        if isinstance(v, Fraction):
            den = den * v.denominator // math.gcd(den, v.denominator)
        elif not isinstance(v, int):
            return None
    ints = [v.numerator * (den // v.denominator) if isinstance(v, Fraction) else v * den for v in flat]
    bound = max((abs(v) for v in ints), default=0)
    return ints, den, bound


def _scaled_cached(arr: np.ndarray):
    """:func:`_scaled_integers`, memoised for read-only arrays that own their data."""
    if arr.flags.writeable or arr.base is not None:
        return _scaled_integers(arr)
    key = id(arr)
    hit = _SCALED_CACHE.get(key)
    if hit is not None and hit[0]() is arr:
        return hit[1]
    result = _scaled_integers(arr)
    ref = weakref.ref(arr, lambda _ref, key=key: _SCALED_CACHE.pop(key, None))
    _SCALED_CACHE[key] = (ref, result)
    return result


def _exact_raw(spec: str, operands):
    """Integer contraction ``(raw, den)`` with ``einsum(spec, *operands) == raw / den``, or ``None``."""
    scaled = [_scaled_cached(op) for op in operands]
    if any(s is None for s in scaled):
        return None
    inputs, output = spec.split("->")
    sizes = {}
    for labels, op in zip(inputs.split(","), operands):
        sizes.update(zip(labels, op.shape))
    terms = math.prod(size for label, size in sizes.items() if label not in output)
    bound = terms * math.prod(s[2] for s in scaled)
    dtype = np.int64 if bound < _INT64_SAFE else object
    int_ops = [np.array(s[0], dtype=dtype).reshape(op.shape) for s, op in zip(scaled, operands)]
    raw = np.asarray(np.einsum(spec, *int_ops, optimize="greedy" if len(int_ops) > 2 else False))
    return raw, math.prod(s[1] for s in scaled)


def _fractions(raw: np.ndarray, den: int) -> np.ndarray:
    # results repeat heavily (mostly zeros), so build each distinct Fraction once
    values, inverse = np.unique(raw.ravel(), return_inverse=True)
    table = np.empty(len(values), dtype=object)
    table[:] = [Fraction(int(v), den) for v in values]
    return table[inverse.reshape(-1)].reshape(raw.shape)


def _exact_einsum(spec: str, operands):
    """Rational einsum through a single integer contraction.

    Each operand is rescaled to integers; the contraction runs in int64 when a
    worst-case magnitude bound allows it, otherwise on Python integers.
    """
    result = _exact_raw(spec, operands)
    return None if result is None else _fractions(*result)


def einsum_sum(terms) -> np.ndarray:
    """``sum(sign * einsum(spec, *ops) for sign, spec, ops in terms)``.

    Exact terms are added as integers over a common denominator, so no
    per-entry Fraction arithmetic happens.
    """
    terms = [(sign, spec, tuple(np.asarray(op) for op in ops)) for sign, spec, ops in terms]
    if all(op.dtype == object for _, _, ops in terms for op in ops):
        raws = [_exact_raw(spec, ops) for _, spec, ops in terms]
        if all(r is not None for r in raws):
            common = math.lcm(*(den for _, den in raws))
            bound = sum(int(np.abs(raw).max(initial=0)) * (common // den) for raw, den in raws)
            dtype = np.int64 if bound < _INT64_SAFE else object
            total = sum(
                sign * raw.astype(dtype) * (common // den) for (sign, _, _), (raw, den) in zip(terms, raws)
            )
            return _fractions(np.asarray(total), common)
    out = None
    for sign, spec, ops in terms:
        value = einsum(spec, *ops)
        value = value if sign == 1 else -value if sign == -1 else sign * value
        out = value if out is None else out + value
    return out


def einsum(spec: str, *operands: np.ndarray) -> np.ndarray:
    """``np.einsum`` with pairwise contraction order; exact inputs give exact output."""
    if any(op.dtype == object for op in operands):
        operands = tuple(np.asarray(op).astype(object, copy=False) for op in operands)
        if "->" in spec:
            fast = _exact_einsum(spec, operands)
            if fast is not None:
                return fast
    return np.einsum(spec, *operands, optimize="greedy" if len(operands) > 2 else False)


def contract_pair(tensor: np.ndarray, g_inv: np.ndarray, slots, variance: str | None = None):
    """Trace two covariant slots against the inverse metric.

    Returns ``sum_ij g^{ij} T(..., b_i, ..., b_j, ...)``, which equals the
    orthonormal-frame sum. ``variance`` is an optional string of ``'u'``/``'l'``
    (contravariant/covariant) per slot; both traced slots must be covariant.
    """
    s0, s1 = slots
    order = tensor.ndim
    for s in (s0, s1):
        if not 0 <= s < order:
            raise ValueError(f"slot {s} out of range for order-{order} tensor")
    if s0 == s1:
        raise ValueError("cannot contract a slot with itself")
    if variance is not None:
        if len(variance) != order:
            raise ValueError(f"variance {variance!r} does not match order {order}")
        if variance[s0] != "l" or variance[s1] != "l":
            raise ValueError(f"slots {slots} are not both covariant in {variance!r}")
    if g_inv.shape != (tensor.shape[s0], tensor.shape[s1]):
        raise ValueError("inverse metric does not match tensor dimension")
    letters = "abcdefgh"[:order]
    rest = "".join(l for k, l in enumerate(letters) if k not in (s0, s1))
    return einsum(f"{letters[s0]}{letters[s1]},{letters}->{rest}", g_inv, tensor)


def apply(endo: np.ndarray, vector: np.ndarray) -> np.ndarray:
    return endo.dot(vector)


def bracket_vectors(structure: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``[x, y]`` from structure constants ``c[i, j, k]``."""
    return einsum("i,j,ijk->k", x, y, structure)


def connection_apply(gamma: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``nabla_x y`` for left-invariant (constant-coefficient) fields."""
    return einsum("i,j,ijk->k", x, y, gamma)


def curvature_from_connection(gamma: np.ndarray, structure: np.ndarray) -> np.ndarray:
    """``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`` on basis fields."""
    return einsum_sum(
        [
            (1, "jkm,iml->ijkl", (gamma, gamma)),
            (-1, "ikm,jml->ijkl", (gamma, gamma)),
            (-1, "ijm,mkl->ijkl", (structure, gamma)),
        ]
    )


def torsion_from_connection(gamma: np.ndarray, structure: np.ndarray) -> np.ndarray:
    """``T(X,Y) = nabla_X Y - nabla_Y X - [X,Y]`` as ``T[i, j, k]``."""
    return gamma - gamma.transpose(1, 0, 2) - structure


def derivative_of_endomorphism(gamma: np.ndarray, endo: np.ndarray) -> np.ndarray:
    """``D[u, k, w] = ((nabla_{b_u} A) b_w)^k`` for a left-invariant (1,1)-tensor ``A``."""
    return einsum_sum([(1, "umk,mw->ukw", (gamma, endo)), (-1, "uwm,km->ukw", (gamma, endo))])


def derivative_of_vector(gamma: np.ndarray, vector: np.ndarray) -> np.ndarray:
    """``D[u, k] = (nabla_{b_u} v)^k``."""
    return einsum("umk,m->uk", gamma, vector)


def derivative_of_covariant(gamma: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    """Covariant derivative of a left-invariant ``(0, r)`` tensor.

    ``D[u, i1..ir] = -sum_s T(b_i1, .., nabla_u b_is, .., b_ir)``.
    """
    r = tensor.ndim
    out = zeros((gamma.shape[0],) + tensor.shape, tensor)
    letters = "abcdefgh"[:r]
    for s in range(r):
        src = letters[:s] + "m" + letters[s + 1:]
        out = out - einsum(f"u{letters[s]}m,{src}->u{letters}", gamma, tensor)
    return out


def derivative_of_mixed(gamma: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    """Covariant derivative of a left-invariant ``(1, r)`` tensor ``T[i1..ir, k]``.

    The last slot is the vector (contravariant) slot.
    """
    r = tensor.ndim - 1
    letters = "abcdefgh"[:r]
    out = einsum(f"umk,{letters}m->u{letters}k", gamma, tensor)
    for s in range(r):
        src = letters[:s] + "m" + letters[s + 1:]
        out = out - einsum(f"u{letters[s]}m,{src}k->u{letters}k", gamma, tensor)
    return out


def lower_last(tensor: np.ndarray, metric: np.ndarray) -> np.ndarray:
    """Lower the trailing vector index with the metric."""
    letters = "abcdefgh"[: tensor.ndim - 1]
    return einsum(f"{letters}m,mz->{letters}z", tensor, metric)


def raise_last(tensor: np.ndarray, g_inv: np.ndarray) -> np.ndarray:
    return lower_last(tensor, g_inv)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.dot(b) - b.dot(a)
