import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from lpsquare.corpus import random_poly
from lpsquare.orlicz import (OrliczParams, khintchine_ratio, orlicz_functional, orlicz_norm,
                             weak_quasinorm)
from lpsquare.spectral import GridFunction, lp_norm, synthesize

ORLICZ_ONE_R1 = 0.8064659942


def brentq_orlicz(a, r):
    """Independent root of ``mean((a/l) log^r(1 + a/l)) = 1``."""
    a = np.abs(np.ravel(a))
    return brentq(lambda lam: np.mean((a / lam) * np.log1p(a / lam) ** r) - 1.0,
                  1e-6 * a.max(), 1e6 * a.max(), xtol=1e-14, rtol=1e-14)


def test_params_validation():
    with pytest.raises(ValueError):
        OrliczParams(r=-1)
    with pytest.raises(ValueError):
        OrliczParams(tol=0)
    with pytest.raises(ValueError):
        OrliczParams(lambda_bracket=(2.0, 1.0))


def test_orlicz_examples():
    ones = GridFunction(np.ones(16))
    assert orlicz_norm(ones, OrliczParams(r=0)) == pytest.approx(1.0, rel=1e-7)
    assert brentq_orlicz(np.ones(4), 1) == pytest.approx(ORLICZ_ONE_R1, abs=1e-9)
    assert orlicz_norm(ones, OrliczParams(r=1)) == pytest.approx(ORLICZ_ONE_R1, abs=1e-6)
    assert orlicz_norm(GridFunction(np.zeros(8))) == 0.0


@pytest.mark.parametrize("r", [0.0, 0.5, 1.0, 2.0, 3.0])
def test_orlicz_matches_root_finder_and_bracket(rng, r):
    params = OrliczParams(r=r)
    for _ in range(10):
        g = synthesize(random_poly(rng, -10, 10), 64)
        lam = orlicz_norm(g, params)
        assert lam == pytest.approx(brentq_orlicz(g.samples, r), rel=1e-7)
        a = g.abs()
        assert orlicz_functional(a, lam, r) <= 1.0
        assert orlicz_functional(a, lam * (1 - 10 * params.tol), r) > 1.0


def test_orlicz_homogeneity_and_bracket_expansion(rng):
    g = synthesize(random_poly(rng, -6, 6), 32)
    base = orlicz_norm(g)
    assert orlicz_norm(GridFunction(2 * g.samples)) == pytest.approx(2 * base, rel=1e-6)
    huge = GridFunction(1e200 * g.samples)
    assert orlicz_norm(huge, OrliczParams(lambda_bracket=(1e-3, 1e-2))) == \
        pytest.approx(1e200 * base, rel=1e-6)


def test_orlicz_r0_is_l1(rng):
    g = synthesize(random_poly(rng, -6, 6), 64)
    assert orlicz_norm(g, OrliczParams(r=0)) == pytest.approx(lp_norm(g, 1), rel=1e-7)


def brute_weak(a):
    a = np.abs(np.ravel(a))
    ts = np.unique(np.concatenate([a, a - 1e-12]))
    return max(t * np.mean(a > t) for t in ts if t > 0) if a.max() > 0 else 0.0


def test_weak_examples():
    assert weak_quasinorm(GridFunction(np.full(8, 3.0))) == 3.0
    g = np.ones(16)
    g[:4] = 2.0
    assert weak_quasinorm(GridFunction(g)) == 1.0
    assert weak_quasinorm(np.zeros(4)) == 0.0


def test_weak_against_brute_force_and_chebyshev(rng):
    for _ in range(100):
        a = np.abs(rng.standard_normal(64)) ** rng.uniform(0.5, 3)
        if rng.uniform() < 0.3:
            a = np.round(a, 1)
        w = weak_quasinorm(a)
        assert w == pytest.approx(brute_weak(a), rel=1e-9)
        assert w <= np.mean(a) * (1 + 1e-12)


def brute_khintchine(a, p):
    """Enumerate every sign vector for each axis of a 1-D or 2-D array."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        vals = [abs(np.dot(e, a)) ** p for e in itertools.product((-1, 1), repeat=a.size)]
    else:
        vals = [abs(np.asarray(e1) @ a @ np.asarray(e2)) ** p
                for e1 in itertools.product((-1, 1), repeat=a.shape[0])
                for e2 in itertools.product((-1, 1), repeat=a.shape[1])]
    return np.mean(vals) ** (1 / p) / np.sqrt(np.sum(np.abs(a) ** 2))


def test_khintchine_examples():
    assert khintchine_ratio([0, 0, 3 - 4j], 0.7) == pytest.approx(1.0, rel=1e-14)
    assert khintchine_ratio([1, 1], 2) == pytest.approx(1.0, rel=1e-14)
    assert khintchine_ratio([1, 1], 1) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    with pytest.raises(ValueError):
        khintchine_ratio([1, 1], 0)


def test_khintchine_rank_one_tensor():
    # the product of two independent (1,1) sums: E|e1 e2| = 1/2 against an l2 norm of 2
    assert khintchine_ratio(np.ones((2, 2)), 1) == pytest.approx(0.5, rel=1e-14)


def test_khintchine_against_brute_force(rng):
    for shape in [(5,), (3, 4), (2, 6)]:
        a = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        for p in (1.0, 1.5, 3.0):
            assert khintchine_ratio(a, p) == pytest.approx(brute_khintchine(a, p), rel=1e-12)


def test_khintchine_monte_carlo_fallback(rng):
    a = rng.standard_normal(20)
    exact = khintchine_ratio(a, 1, max_exact=20)
    approx = khintchine_ratio(a, 1, max_exact=12, samples=200_000, rng=rng)
    assert approx == pytest.approx(exact, rel=1e-2)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=8))
def test_khintchine_p2_is_one(coeffs):
    a = np.asarray(coeffs)
    if not np.any(a):
        return
    assert abs(khintchine_ratio(a, 2) - 1.0) < 1e-12
