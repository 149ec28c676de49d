import numpy as np
import pytest
from hypothesis import given, strategies as st

from opint.errors import Divergent, GridTooCoarse
from opint.funkit import (
    Modulus,
    Sampled,
    besov_norm,
    holder_seminorm,
    library,
    lp_decompose,
    omega_star,
    sample_function,
    w,
)


def periodic_sin(freq=1.0, periods=8, points=4096):
    return sample_function(lambda x: np.sin(freq * x), 0.0, 2 * np.pi * periods / points, points)


def test_partition_of_unity():
    s = np.linspace(0.6, 40.0, 1000)
    total = sum(w(s / 2.0**n) for n in range(-3, 8))
    assert np.abs(total - 1).max() <= 1e-10


def test_bump_support_and_symmetry():
    s = np.linspace(0, 5, 5001)
    v = w(s)
    assert np.all(v[(s < 0.5) | (s > 2)] == 0)
    t = np.linspace(1, 2, 101)
    assert np.allclose(w(t), 1 - w(t / 2), atol=1e-15)


def test_sin_is_single_piece():
    smp = periodic_sin()
    dec = lp_decompose(smp, (-3, 3))
    assert np.abs(dec.pieces[0] - smp.values).max() <= 1e-6
    for n in (-3, -2, -1, 1, 2, 3):
        assert dec.sup_norms[n] <= 1e-12


def test_zero_function():
    smp = Sampled(0.0, 0.1, np.zeros(256))
    dec = lp_decompose(smp, (-2, 2))
    assert all(v == 0 for v in dec.sup_norms.values())
    assert besov_norm(smp, 1.0, np.inf, 1.0, (-2, 2)) == 0.0


def test_phi_pieces_vanish_above_band():
    smp = sample_function(library("phi"), -100.0, 0.02, 10001)
    dec = lp_decompose(smp, (-3, 6), periodic=False)
    for n in (4, 5, 6):  # 2^(n-1) > 2 pi
        assert dec.sup_norms[n] <= 1e-6
    assert dec.sup_norms[1] > 0.1


def test_reconstruction():
    smp = sample_function(library("exp"), -1.0, 0.01, 201)
    dec = lp_decompose(smp, (-2, 5), periodic=False)
    err = np.linalg.norm(dec.reconstruct() - smp.values) / np.linalg.norm(smp.values)
    assert err <= 1e-6


def test_sin_besov_value():
    assert besov_norm(periodic_sin(), 1.0, np.inf, 1.0, (-3, 3)) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("freq", [0.75, 1.0, 1.5])
def test_dilation_scaling(freq):
    a = besov_norm(periodic_sin(freq, periods=16), 1.0, np.inf, 1.0, (-3, 4))
    b = besov_norm(periodic_sin(2 * freq, periods=32), 1.0, np.inf, 1.0, (-3, 4))
    assert b == pytest.approx(2 * a, rel=0.05)


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        lp_decompose(Sampled(0.0, 1.0, np.zeros(64)), (-1, 3))


def test_two_dimensional_pieces():
    smp = sample_function(lambda x, y: np.sin(x) * np.cos(y), (0, 0), (2 * np.pi / 64, 2 * np.pi / 64), (256, 256))
    dec = lp_decompose(smp, (-3, 3))
    # |(1, 1)| = sqrt 2 lies in the overlap of pieces 0 and 1
    assert np.abs(dec.reconstruct() - smp.values).max() <= 1e-12
    assert dec.sup_norms[-1] <= 1e-12 and dec.sup_norms[2] <= 1e-12


def test_sampled_json_round_trip():
    smp = Sampled(0.5, 0.25, np.arange(4.0))
    obj = smp.to_json()
    assert obj == {"grid_start": 0.5, "grid_step": 0.25, "values": [0.0, 1.0, 2.0, 3.0]}
    back = Sampled.from_json(obj)
    assert np.array_equal(back.values, smp.values)


def _spectral_mass_outside(f, sigma):
    x = np.linspace(-32 * np.pi / sigma, 32 * np.pi / sigma, 4096, endpoint=False)
    F = np.abs(np.fft.fft(f(x))) ** 2
    t = 2 * np.pi * np.fft.fftfreq(4096, d=x[1] - x[0])
    return F[np.abs(t) > 1.01 * sigma].sum() / F.sum()


@pytest.mark.parametrize("name,kw", [("sin", {}), ("sin_sigma", {"sigma": 2.5})])
def test_declared_bandlimit_probe(name, kw):
    f = library(name, **kw)
    assert _spectral_mass_outside(f, f.bandlimit) <= 1e-6


def test_phi_bandlimit_probe():
    f = library("phi")
    # phi is not periodic on the probe window; taper before the transform
    x = np.linspace(-16.0, 16.0, 4096, endpoint=False)
    taper = np.cos(np.pi * x / 32.0) ** 2
    F = np.abs(np.fft.fft(f(x) * taper)) ** 2
    t = 2 * np.pi * np.fft.fftfreq(4096, d=x[1] - x[0])
    assert F[np.abs(t) > 1.01 * f.bandlimit].sum() / F.sum() <= 1e-6


@given(st.floats(0.2, 4.0), st.floats(-np.pi, np.pi))
def test_bernstein_inequality(sigma, phase):
    x = np.linspace(-20, 20, 20001)
    f = np.sin(sigma * x + phase) + 0.5 * np.cos(0.3 * sigma * x)
    df = sigma * np.cos(sigma * x + phase) - 0.15 * sigma * np.sin(0.3 * sigma * x)
    assert np.abs(df).max() <= 1.01 * sigma * np.abs(f).max()


def test_holder_seminorm_examples():
    alpha = 0.5
    f = lambda x: np.abs(x) ** alpha  # noqa: E731
    hs = np.logspace(-3, 0, 7)
    assert holder_seminorm(f, alpha, [(0.0, h) for h in hs]) == pytest.approx(1.0)
    assert holder_seminorm(lambda x: 3.0 + 0 * x, alpha, [(0.0, 1.0), (2.0, 5.0)]) == 0.0
    grid = np.linspace(0, 1, 101)
    pairs = np.array([(a, b) for a in grid for b in grid])
    assert holder_seminorm(lambda x: x, 0.5, pairs) == pytest.approx(1.0)


def test_omega_star_examples():
    for a in (0.25, 0.5, 0.75):
        for x in (0.3, 1.0, 4.0):
            assert omega_star(lambda t: t**a, x) == pytest.approx(x**a / (1 - a), rel=1e-8)
    assert omega_star(lambda t: np.sqrt(t), 1.0) == pytest.approx(2.0, rel=1e-8)
    assert omega_star(lambda t: np.minimum(t, 1.0), 2.0) == pytest.approx(1.0, rel=1e-8)


def test_omega_star_divergent():
    with pytest.raises(Divergent):
        omega_star(lambda t: t, 1.0)


def test_modulus_check():
    s = np.linspace(0, 5, 60)
    assert Modulus(lambda t: np.sqrt(t)).check(s)
    assert Modulus(lambda t: np.minimum(t, 1.0)).check(s)
    assert not Modulus(lambda t: t**2).check(s)
