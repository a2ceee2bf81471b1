import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import as_float, factor, random_rational_metric
from sasprod import tensors as tz
from sasprod.scalars import agree, inverse, to_backend


def _random_tensor(rng, shape):
    return to_backend(
        np.array([Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(int(np.prod(shape)))]).reshape(shape),
        "exact",
    )


def test_trace_of_metric_is_dimension():
    g = random_rational_metric(random.Random(3), 5)
    assert tz.contract_pair(g, inverse(g), (0, 1)) == 5


def test_ricci_of_su2_by_contraction():
    s = factor("su2")
    m = s.algebra
    lowered = tz.lower_last(m.curvature, m.metric)
    ric = tz.contract_pair(lowered, m.inverse_metric, (0, 3))
    assert agree(ric, to_backend(np.diag([2, 2, 2]), "exact"))


def test_contraction_equals_orthonormal_frame_sum():
    rng = random.Random(11)
    n = 4
    g = random_rational_metric(rng, n)
    ginv = inverse(g)
    gf = as_float(g)
    # Gram-Schmidt in float: columns of E are g-orthonormal
    frame = []
    for v in np.eye(n):
        for e in frame:
            v = v - (e @ gf @ v) * e
        frame.append(v / np.sqrt(v @ gf @ v))
    for _ in range(20):
        t = _random_tensor(rng, (n, n, n))
        for slots in [(0, 1), (0, 2), (1, 2)]:
            exact = tz.contract_pair(t, ginv, slots)
            letters = "abc"
            spec = f"{letters},{letters[slots[0]]},{letters[slots[1]]}->" + "".join(
                l for k, l in enumerate(letters) if k not in slots
            )
            oracle = sum(np.einsum(spec, as_float(t), e, e) for e in frame)
            assert np.allclose(as_float(exact), oracle, atol=1e-10)


def test_contraction_is_basis_independent():
    rng = random.Random(5)
    n = 4
    g = random_rational_metric(rng, n)
    t = _random_tensor(rng, (n, n, n))
    p = _random_tensor(rng, (n, n))
    while abs(np.linalg.det(as_float(p))) < 1e-6:
        p = _random_tensor(rng, (n, n))
    g_new = tz.einsum("ia,jb,ij->ab", p, p, g)
    t_new = tz.einsum("ia,jb,kc,ijk->abc", p, p, p, t)
    before = tz.contract_pair(t, inverse(g), (0, 1))
    after = tz.contract_pair(t_new, inverse(g_new), (0, 1))
    assert agree(after, tz.einsum("ka,k->a", p, before))


@pytest.mark.parametrize(
    "spec, shapes",
    [("ij,jk->ik", [(3, 4), (4, 2)]), ("ijk,kl->ijl", [(2, 3, 4), (4, 4)]), ("i,ijk->jk", [(3,), (3, 3, 3)])],
)
def test_exact_einsum_matches_numpy(spec, shapes):
    rng = random.Random(len(spec))
    ops = [_random_tensor(rng, s) for s in shapes]
    exact = tz.einsum(spec, *ops)
    assert exact.dtype == object
    assert np.allclose(as_float(exact), np.einsum(spec, *map(as_float, ops)), atol=1e-12)


def test_exact_einsum_with_huge_entries_stays_exact():
    big = np.array([Fraction(10**30 + 1, 7), Fraction(-(10**30), 3)], dtype=object)
    assert tz.einsum("i,i->", big, big) == big[0] ** 2 + big[1] ** 2


def test_float_and_exact_backends_agree():
    s = factor("sl2r")
    exact = s.algebra.ricci
    flt = factor("sl2r", backend="float").algebra.ricci
    assert flt.dtype == float
    assert np.allclose(flt, as_float(exact), rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("slots", [(0, 3), (1, 1), (-1, 0)])
def test_contract_pair_slot_errors(slots):
    g = to_backend(np.eye(3, dtype=int), "exact")
    with pytest.raises(ValueError):
        tz.contract_pair(np.zeros((3, 3, 3), dtype=object), g, slots)


def test_contract_pair_rejects_contravariant_slot():
    g = to_backend(np.eye(3, dtype=int), "exact")
    with pytest.raises(ValueError):
        tz.contract_pair(np.zeros((3, 3, 3), dtype=object), g, (0, 1), variance="ull")
    with pytest.raises(ValueError):
        tz.contract_pair(np.zeros((3, 3, 3), dtype=object), g, (0, 1), variance="ll")


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_signed_sum_of_contractions(seed):
    rng = random.Random(seed)
    a, b, c = _random_tensor(rng, (3, 3, 3)), _random_tensor(rng, (3, 3)), _random_tensor(rng, (3, 3, 3))
    terms = [(1, "ijm,mk->ijk", (a, b)), (-1, "mjk,im->ijk", (c, b)), (3, "ijk->ijk", (a,))]
    expected = np.einsum("ijm,mk->ijk", a, b) - np.einsum("mjk,im->ijk", c, b) + 3 * a
    got = tz.einsum_sum(terms)
    assert (got == expected).all()
    assert all(isinstance(v, Fraction) for v in got.ravel())
    flt = tz.einsum_sum([(s, spec, tuple(as_float(op) for op in ops)) for s, spec, ops in terms])
    assert np.allclose(flt, as_float(expected), atol=1e-12)


def test_signed_sum_with_huge_entries():
    big = to_backend(np.array([[2**61, 1], [Fraction(1, 3), -(2**61)]], dtype=object), "exact")
    got = tz.einsum_sum([(1, "ij->ij", (big,)), (1, "ji->ij", (big,))])
    assert got[0, 0] == 2**62 and got[1, 1] == -(2**62) and got[0, 1] == Fraction(4, 3)
