import random
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import settings

from sasprod.product_hermitian import build_product
from sasprod.sasaki import catalog, d_homothety

settings.register_profile("sasprod", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("sasprod")

THREE_DIM = ("su2", "h3", "sl2r")


@lru_cache(maxsize=None)
def factor(name: str, s: Fraction | None = None, backend: str = "exact"):
    base = catalog(name, backend)
    return base if s is None else d_homothety(base, s)


@lru_cache(maxsize=None)
def product(name1: str, name2: str, a, b, backend: str = "exact", s1=None, s2=None):
    """Cached product; caching also keeps the lazily built tensors around between tests."""
    return build_product(factor(name1, s1, backend), factor(name2, s2, backend), a, b)


def random_rationals(seed: int, count: int, bound: int = 3, max_den: int = 5):
    """Deterministic rational pairs ``(a, b)`` with ``b != 0``."""
    rng = random.Random(seed)

    def draw():
        return Fraction(rng.randint(-bound * max_den, bound * max_den), rng.randint(1, max_den))

    out = []
    while len(out) < count:
        a, b = draw(), draw()
        if b != 0 and (a, b) not in out:
            out.append((a, b))
    return out


def random_rational_metric(rng: random.Random, n: int) -> np.ndarray:
    """Symmetric positive-definite rational matrix ``A^T A + I``."""
    a = np.array([[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)], dtype=object)
    g = a.T.dot(a)
    for i in range(n):
        g[i, i] += 1
    return g


def as_float(arr) -> np.ndarray:
    return np.asarray(arr, dtype=object).astype(float)


@pytest.fixture
def rng():
    return random.Random(20240617)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
