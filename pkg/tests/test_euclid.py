import math

import numpy as np
import pytest

from lpsquare.corpus import random_bandlimited, smooth_bump
from lpsquare.euclid import (BandlimitedFn, ConeParams, box_lp_norm, euclid_square_function,
                             nontangential_max, poisson_extension, poisson_kernel, rough_project)

L, R = 64.0, 4096


def bump_fn(a, b, shift=0.0, halfwidth=L, resolution=R):
    return BandlimitedFn.from_spectrum(
        lambda xi: smooth_bump(xi, a, b) * np.exp(-2j * np.pi * xi * shift), halfwidth, resolution)


def test_from_spectrum_matches_quadrature():
    f = bump_fn(1.2, 2.7)
    x = f.grid()
    xi = np.linspace(1.2, 2.7, 20001)
    for i in (R // 2, R // 2 + 7, R // 2 - 40):
        integrand = smooth_bump(xi, 1.2, 2.7) * np.exp(2j * np.pi * xi * x[i])
        oracle = np.trapezoid(integrand, xi)
        assert abs(f.samples[i] - oracle) < 1e-9
    assert f.spectral_support[0][0] >= 1.2 and f.spectral_support[0][1] <= 2.7


def test_nyquist_and_decay_checks():
    with pytest.raises(ValueError, match="Nyquist"):
        BandlimitedFn.from_spectrum(lambda xi: smooth_bump(xi, 1.0, 3.0), 64.0, 512)
    with pytest.raises(ValueError):
        BandlimitedFn(1.0, np.zeros(8), ((0.0, 2.0),))
    with pytest.raises(ValueError, match="enlarge"):
        BandlimitedFn.from_spectrum(lambda xi: (np.abs(xi - 2) < 0.5).astype(float), 8.0, 512,
                                    decay_tol=1e-6)


def test_json_round_trip(tmp_path):
    f = bump_fn(0.5, 1.5)
    doc = f.to_json()
    assert doc["domain_halfwidth"] == L
    back = BandlimitedFn.from_json(doc)
    np.testing.assert_array_equal(back.samples, f.samples)
    f.save(tmp_path / "f.json")


def test_rough_project_examples():
    f = bump_fn(2.1, 2.9)
    np.testing.assert_allclose(rough_project(f, 1).samples, f.samples, atol=1e-15)
    assert np.max(np.abs(rough_project(f, 3).samples)) < 1e-15
    P = rough_project(f, 1)
    np.testing.assert_allclose(rough_project(P, 1).samples, P.samples, atol=1e-15)
    with pytest.raises(ValueError):
        rough_project(f, 1, axis=2)


def test_rough_partition(rng):
    for _ in range(10):
        f = random_bandlimited(rng, analytic=False)
        total = sum(rough_project(f, k).samples for k in range(-5, 5))
        assert np.max(np.abs(total - f.samples)) < 1e-8 * np.max(np.abs(f.samples))


def test_euclid_square_function_single_window():
    f = BandlimitedFn.from_spectrum(lambda xi: ((xi >= 1) & (xi < 2)).astype(float), L, R)
    np.testing.assert_allclose(euclid_square_function(f).samples.real, np.abs(f.samples),
                               atol=1e-12)


def test_euclid_parseval(rng):
    for dim in (1, 2):
        for _ in range(5):
            f = random_bandlimited(rng, halfwidth=64.0, resolution=512, analytic=False,
                                   dim=dim, band=1.5)
            assert box_lp_norm(euclid_square_function(f), 2) == \
                pytest.approx(box_lp_norm(f, 2), rel=1e-8)


def test_euclid_square_function_product(rng):
    g = random_bandlimited(rng, resolution=512, band=1.5)
    h = random_bandlimited(rng, resolution=512, analytic=False, band=1.5)
    f = BandlimitedFn(64.0, np.multiply.outer(g.samples, h.samples))
    lhs = euclid_square_function(f).samples.real
    rhs = np.multiply.outer(euclid_square_function(g).samples.real,
                            euclid_square_function(h).samples.real)
    assert np.max(np.abs(lhs - rhs)) < 1e-10 * np.max(rhs)


def test_poisson_extension(rng):
    # |1 - exp(-2 pi t xi)| < 1e-3 needs xi < 1.59 at t = 1e-4
    f = random_bandlimited(rng, band=1.5)
    near = poisson_extension(f, 1e-4)
    assert box_lp_norm(near.with_spectrum(near.spectrum() - f.spectrum()), 2) < \
        1e-3 * box_lp_norm(f, 2)
    a = poisson_extension(poisson_extension(f, 0.3), 0.2).samples
    b = poisson_extension(f, 0.5).samples
    assert np.max(np.abs(a - b)) < 1e-10 * np.max(np.abs(b))
    with pytest.raises(ValueError):
        poisson_extension(f, 0.0)


def test_poisson_single_frequency():
    xi0, t = 3.0, 0.05
    f = bump_fn(xi0 - 0.01, xi0 + 0.01)
    out = poisson_extension(f, t)
    c_in, c_out = f.spectrum(), out.spectrum()
    on = np.abs(c_in) > 1e-6 * np.abs(c_in).max()
    xi = f.frequencies()[on]
    np.testing.assert_allclose(c_out[on] / c_in[on], np.exp(-2 * np.pi * t * np.abs(xi)),
                               rtol=1e-9)
    ratio = box_lp_norm(out, 2) / box_lp_norm(f, 2)
    assert ratio == pytest.approx(math.exp(-2 * math.pi * t * xi0), rel=1e-3)


def test_poisson_kernel_unit_mass():
    k = poisson_kernel(256.0, 1 << 14)
    x = k.grid()
    assert np.sum(k.samples.real) * k.spacing == pytest.approx(1.0, abs=1e-3)
    i = np.argmin(np.abs(x - 1.0))
    assert k.samples[i].real == pytest.approx(1 / (2 * math.pi), rel=1e-3)


def test_nontangential_max_at_origin():
    k = poisson_kernel(1024.0, 1 << 16)
    Nk = nontangential_max(k, ConeParams(t_min=1e-3, t_max=10.0))
    i = np.argmin(np.abs(k.grid()))
    assert abs(Nk.samples[i].real - 1 / math.pi) < 1e-2


def test_nontangential_dominates_and_is_monotone(rng):
    f = random_bandlimited(rng)
    small = nontangential_max(f, ConeParams(t_min=1e-2, t_max=1.0, t_count=4))
    big = nontangential_max(f, ConeParams(t_min=1e-6, t_max=4.0, t_count=4))
    fine = nontangential_max(f, ConeParams(t_min=1e-6, t_max=4.0, t_count=4, x_count=4))
    assert np.all(big.samples.real >= small.samples.real - 1e-14)
    assert np.all(fine.samples.real >= big.samples.real - 1e-14)
    assert np.all(np.abs(f.samples) <= big.samples.real + 1e-4 * np.abs(f.samples).max())


def test_cone_heights_nested():
    a = ConeParams(t_min=0.01, t_max=1.0, t_count=8).heights()
    b = ConeParams(t_min=0.001, t_max=4.0, t_count=8).heights()
    inner = a[1:-1]
    assert np.all(np.isin(inner, b))
    assert ConeParams(x_count=3).refinement() == 4
    with pytest.raises(ValueError):
        ConeParams(t_min=1.0, t_max=0.5)


def test_nontangential_lp_ratio_bounded(rng):
    ratios = {p: [] for p in (1.2, 1.5, 2.0)}
    cone = ConeParams(t_min=1e-6, t_max=10.0, t_count=4)
    for _ in range(50):
        f = random_bandlimited(rng, halfwidth=64.0, resolution=2048)
        Nf = nontangential_max(f, cone)
        for p in ratios:
            ratios[p].append(box_lp_norm(Nf, p) / box_lp_norm(f, p))
    for p, r in ratios.items():
        assert min(r) >= 1.0 - 1e-3
        assert max(r) < 10.0
