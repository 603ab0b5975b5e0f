import math

import numpy as np
import pytest
from scipy.special import eval_jacobi

import su2hk


def brute_spectral(t, r, z, nmax=40, kmax=30):
    s = 0.0
    for n in range(-nmax, nmax + 1):
        an = abs(n)
        for k in range(kmax + 1):
            lam = 4.0 * k * (k + an + 1) + 2.0 * an
            if lam * t > 700:
                break
            s += (2 * k + an + 1) * math.exp(-lam * t) * math.cos(n * z) * math.cos(r) ** an * eval_jacobi(
                k, 0.0, an, math.cos(2 * r)
            )
    return s


@pytest.mark.parametrize("t,r,z", [(0.5, 0.8, 1.2), (1.0, 0.3, -2.0), (0.4, 1.4, 0.1)])
def test_kernel_matches_series(t, r, z):
    assert su2hk.pt(t, r, z).value == pytest.approx(brute_spectral(t, r, z), rel=1e-10)


def test_identity_value_and_representation():
    e = su2hk.pt(1.0, 0.0, 0.0)
    assert e.representation == "CUTLOCUS_CLOSED"
    assert e.value == pytest.approx(1.676079176957747, rel=1e-12)
    assert su2hk.pt_diagonal(1.0) == pytest.approx(e.value, rel=1e-12)


def test_grid_is_positive_and_even_in_z():
    r = np.linspace(0.05, 1.5, 6)
    z = np.linspace(-3, 3, 7)
    g = su2hk.pt_grid(0.6, r, z)
    assert g.shape == (6, 7)
    assert (g > 0).all()
    np.testing.assert_allclose(g, g[:, ::-1], rtol=1e-11)


def test_distance():
    assert su2hk.cc_distance(0.7, 0.0)["d"] == pytest.approx(0.7, rel=1e-12)
    d = su2hk.cc_distance(0.0, math.pi)
    assert d["d_squared"] == pytest.approx(math.pi**2, rel=1e-12)
    assert d["on_cut_locus"]


def test_heisenberg_origin():
    assert su2hk.gaveau_kernel(1.0, 0.0, 0.0) == pytest.approx(1 / 32, rel=1e-10)


def test_constants_at_large_time():
    lead = 4 * math.exp(-12)
    assert su2hk.a_const(3.0) / lead == pytest.approx(1, abs=0.02)
    assert su2hk.c_const(3.0) / lead == pytest.approx(1, abs=0.02)


def test_sampler_mean():
    x = su2hk.simulate(n_paths=20000, step=1e-2, t_final=0.5, seed=7)
    assert x.shape == (20000, 3)
    v = np.cos(x[:, 0]) * np.cos(x[:, 2])
    # first-order weak bias at h = 1e-2 is about 1e-3
    assert abs(v.mean() - math.exp(-1)) <= 3 * v.std(ddof=1) / math.sqrt(len(v)) + 2e-3


def test_errors_raise():
    with pytest.raises(su2hk.Su2hkError):
        su2hk.pt(-1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        su2hk.cc_distance(2.0, 0.0)
