import numpy as np
import pytest

from conftest import direct_eval
from lpsquare.corpus import random_poly
from lpsquare.kernels import (FAMILIES, FamilySpec, diag_embed, dirichlet_block, family_poly,
                              family_span, fejer, pichorides_fn, vallee_poussin)
from lpsquare.multipliers import delta_project, square_function
from lpsquare.orlicz import OrliczParams, orlicz_norm
from lpsquare.spectral import TrigPoly, is_analytic, lp_norm, synthesize, tensor_product

# 10^6-point midpoint rule for |sin(2^N pi x) / sin(pi x)|
DIRICHLET_L1 = {4: 2.113165971262379, 5: 2.3940528388338866, 6: 2.6749660308913805,
                7: 2.955885793750934, 8: 3.2368072149575053, 9: 3.5177290682940416,
                10: 3.7986508342132037}


def test_fejer_examples():
    assert fejer(0) == TrigPoly.constant(1)
    assert fejer(2).coeff(1) == pytest.approx(2 / 3, rel=1e-15)
    for n in (1, 4, 9):
        K = fejer(n)
        assert direct_eval(K, [[0.0]])[0].real == pytest.approx(n + 1, rel=1e-14)
        assert lp_norm(K, 1) == pytest.approx(1.0, rel=1e-9)
    with pytest.raises(ValueError):
        fejer(-1)


def test_vallee_poussin_trapezoid():
    for N in range(1, 8):
        V = vallee_poussin(N)
        M = 2 ** N
        assert V.coeff(0) == 1 and V.coeff(2 * M) == 0 and V.coeff(-2 * M) == 0
        assert V.coeff(3 * 2 ** (N - 1)) == 0.5
        assert V.span == (4 * M - 2,)
        # trapezoid = 2 K_{2M-1} - K_{M-1}
        assert V.max_abs_diff(fejer(2 * M - 1) * 2 - fejer(M - 1)) < 1e-15
    with pytest.raises(ValueError):
        vallee_poussin(0)


def test_vallee_poussin_l1_bound():
    for N in range(1, 11):
        assert lp_norm(vallee_poussin(N), 1) <= 3


def test_pichorides_family():
    for N in range(1, 9):
        f = pichorides_fn(N)
        assert is_analytic(f)
        assert delta_project(f, N + 1) == dirichlet_block(N)
        lo, hi = f.support_box[0]
        assert (lo, hi) == (1, 2 ** (N + 2) - 1)
        assert f.span == (family_span("pichorides", N),)
    f = pichorides_fn(3)
    g = pichorides_fn(3, 2)
    assert g == tensor_product([f, f])
    R = 512
    assert lp_norm(synthesize(g, (R, R)), 1) == \
        pytest.approx(lp_norm(synthesize(f, R), 1) ** 2, rel=1e-6)


def test_dirichlet_block():
    for N in range(1, 8):
        D = dirichlet_block(N)
        assert D.l2_norm() == pytest.approx(2 ** (N / 2), rel=1e-14)
    x = (np.arange(1, 512)) / 512
    D = synthesize(dirichlet_block(5), 512).samples[1:]
    np.testing.assert_allclose(np.abs(D), np.abs(np.sin(32 * np.pi * x) / np.sin(np.pi * x)),
                               atol=1e-11)


def test_dirichlet_l1_growth():
    x = (np.arange(10 ** 6) + 0.5) / 10 ** 6
    for N in (4, 10):
        oracle = np.mean(np.abs(np.sin(2 ** N * np.pi * x) / np.sin(np.pi * x)))
        assert oracle == pytest.approx(DIRICHLET_L1[N], rel=1e-12)
    v = {N: lp_norm(synthesize(dirichlet_block(N), 1 << 20), 1) for N in range(4, 11)}
    for N in range(4, 11):
        assert v[N] == pytest.approx(DIRICHLET_L1[N], rel=1e-5)
    for N in range(4, 10):
        assert 0.2 <= v[N + 1] - v[N] <= 0.5
    ref = v[10] / 10
    for N in range(6, 11):
        assert abs(v[N] / N - ref) <= 0.2 * ref


def test_square_function_dominates_dirichlet_block():
    for N in (3, 6):
        f = pichorides_fn(N)
        res = 4 * 2 ** (N + 2)
        S = square_function(f, res).samples.real
        D = np.abs(synthesize(dirichlet_block(N), res).samples)
        assert np.all(D <= S + 1e-12)


def test_orlicz_growth_of_f_N():
    for r in (1, 2):
        vals = [orlicz_norm(synthesize(pichorides_fn(N), 4 * 2 ** (N + 2)), OrliczParams(r=r))
                / N ** r for N in range(4, 11)]
        assert max(vals) / min(vals) <= 1.5


def test_diag_embed(rng):
    assert diag_embed(TrigPoly.constant(2.0), 3) == TrigPoly.constant(2.0, dim=3)
    F = random_poly(rng, -5, 5)
    g = diag_embed(F, 2)
    assert all(n[0] == n[1] for n in g.freqs)
    for p in (1, 2):
        assert lp_norm(g, p) == pytest.approx(lp_norm(F, p), rel=1e-6)
    with pytest.raises(ValueError):
        diag_embed(g, 2)


def test_family_spec():
    for name in FAMILIES:
        spec = FamilySpec(name, 3, 2)
        f = family_poly(spec)
        assert f.dim == 2
        assert max(f.span) <= family_span(name, 3)
    with pytest.raises(ValueError):
        FamilySpec("nope", 3)
    with pytest.raises(ValueError):
        FamilySpec("fejer", 0)
