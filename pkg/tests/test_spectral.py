import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosegas import potentials as pots
from bosegas import spectral
from bosegas.scattering import g_omega_zero, solve_scattering


def test_low_set_is_three_axis_points():
    # spacing 1 (ell = pi), threshold K_H/ell just above 1: the three unit
    # vectors are low, the sqrt(2) shell is high
    lat = spectral.build_lattice(math.pi, 4.0, 1.5)
    assert lat.count(spectral.TAG_LOW) == 3
    assert lat.count(spectral.TAG_HIGH) == 3
    assert lat.count(spectral.TAG_ZERO) == 1


def test_boundary_momentum_is_low_inclusively():
    # threshold equal to a shell radius: |p| = K_H / ell exactly -> low
    lat = spectral.build_lattice(math.pi, math.pi * math.sqrt(2.0), 1.8)
    low = lat.p_norm[lat.tag == spectral.TAG_LOW]
    assert np.isclose(low.max(), math.sqrt(2.0))
    assert lat.count(spectral.TAG_LOW) == 6  # (1,0,0)x3 and (1,1,0)x3


def test_density_scales_with_volume():
    small = spectral.build_lattice(8.0, 1.0, 2.0)
    big = spectral.build_lattice(16.0, 1.0, 2.0)
    ratio = big.p_norm.size / small.p_norm.size
    assert 6.5 < ratio < 9.5


def test_low_count_asymptotics():
    # the surface correction is ~ 2.25 pi / K_H relative, so the 10% window
    # needs K_H ~ 75 or more; probed at 100
    k_h = 100.0
    lat = spectral.build_lattice(1.0, k_h, k_h + 2.0)
    expected = (math.pi / 6.0) * (k_h / math.pi) ** 3
    assert abs(lat.count(spectral.TAG_LOW) - expected) / expected < 0.10


def test_tau_values():
    ell = math.pi
    lat = spectral.build_lattice(ell, 4.0, 1.5)
    t = spectral.tau(lat)
    zero = lat.tag == spectral.TAG_ZERO
    assert np.all(t[zero] == 0.0)
    low = lat.tag == spectral.TAG_LOW
    np.testing.assert_allclose(t[low], lat.p_norm[low] ** 2 - math.pi / (2 * ell ** 2))
    high = lat.tag == spectral.TAG_HIGH
    np.testing.assert_allclose(
        t[high], lat.p_norm[high] ** 2 - math.pi / (2 * ell ** 2) - 4.0 / ell ** 2)
    assert np.all(t <= lat.p_norm ** 2)


def test_tau_quarter_floor_in_valid_configurations():
    lat = spectral.build_lattice(6.0, 4.0, 3.0)
    t = spectral.tau(lat)
    nz = lat.tag != spectral.TAG_ZERO
    eligible = nz & (lat.K_H <= (lat.p_norm * lat.ell) ** 2 / 2.0)
    assert np.all(t[eligible] >= lat.p_norm[eligible] ** 2 / 4.0)
    rep = lat.tau_floor_report()
    assert rep["violations"] == 0
    assert rep["tau_over_p2_min"] > 0.0


def test_bogoliubov_limits_and_identity():
    d, alpha = spectral.bogoliubov(2.0, 0.0)
    assert d == 2.0 and alpha == 0.0
    rng = np.random.default_rng(3)
    t = rng.uniform(1e-8, 1e4, 1000)
    x = rng.uniform(0.0, 1e4, 1000)
    d, alpha = spectral.bogoliubov(t, x)
    np.testing.assert_allclose(d ** 2, t ** 2 + 2 * t * x, rtol=1e-12)
    # diagonalization residuals of the quadratic-form identity
    r1 = (t + x) * (1 - alpha ** 2) - d * (1 + alpha ** 2)
    r2 = x * (1 - alpha ** 2) - 2 * d * alpha
    r3 = 0.5 * (d - t - x) + d * alpha ** 2 / (1 - alpha ** 2)
    scale = np.maximum(t + x, 1.0)
    assert np.max(np.abs(r1) / scale) < 1e-12
    assert np.max(np.abs(r2) / scale) < 1e-12
    assert np.max(np.abs(r3) / scale) < 1e-12


def test_bogoliubov_monotone_in_condensate_density():
    t = np.array([0.3, 1.0, 7.0])
    prev = spectral.bogoliubov(t, 0.0 * t)[0]
    for factor in (0.1, 1.0, 10.0):
        cur = spectral.bogoliubov(t, factor * t)[0]
        assert np.all(cur >= prev - 1e-15)
        prev = cur


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-6, 1e6), st.floats(0.0, 1e6))
def test_alpha_in_unit_interval(t, x):
    _, alpha = spectral.bogoliubov(t, x)
    assert 0.0 <= alpha < 1.0


def test_bogoliubov_radicand_fault():
    with pytest.raises(ValueError, match="negative radicand"):
        spectral.bogoliubov(-0.5, 1.0)


def test_c_factor_values():
    assert spectral.c_factor((1, 2, 3), (4, 5, 6)) == pytest.approx(1 / math.sqrt(8))
    assert spectral.c_factor((0, 0, 0), (1, 2, 3)) == pytest.approx(1.0)
    assert spectral.c_factor((1, 1, 0), (1, 1, 1)) == pytest.approx(0.25)


def test_c_factor_exhaustive_range():
    # brute-force oracle over all zero/equality patterns per coordinate
    def c(n):
        return 1.0 if n == 0 else math.sqrt(2.0)

    values = set()
    comps = (0, 1, 2)
    for p in itertools.product(comps, repeat=3):
        for k in itertools.product(comps, repeat=3):
            direct = math.prod(c(ki - pi) / (c(pi) * c(ki)) for pi, ki in zip(p, k))
            assert spectral.c_factor(p, k) == pytest.approx(direct)
            values.add(round(direct, 12))
    assert min(values) == pytest.approx(1.0 / 8.0)   # p = k, all components nonzero
    assert max(values) == pytest.approx(1.0)
    # off-diagonal use (p != k) cannot reach the 1/8 corner
    off = [spectral.c_factor(p, k)
           for p in itertools.product(comps, repeat=3)
           for k in itertools.product(comps, repeat=3) if p != k]
    assert min(off) == pytest.approx(1.0 / (4.0 * math.sqrt(2.0)))


def test_shell_counts_match_direct_enumeration():
    m_max = 64
    for signed in (True, False):
        counts = spectral.shell_counts(m_max, signed=signed, dim=3)
        rng = range(-8, 9) if signed else range(0, 9)
        direct = np.zeros(m_max + 1)
        for i in rng:
            for j in rng:
                for k in rng:
                    m = i * i + j * j + k * k
                    if m <= m_max:
                        direct[m] += 1
        np.testing.assert_array_equal(counts, direct)


def test_lattice_sum_identity_for_hard_core():
    sol = solve_scattering(pots.hard_core(1.0))
    gw0 = g_omega_zero(sol)  # exactly 8 pi a: the boundary layer sees omega = 1
    constants = []
    for ell in (10.0, 20.0, 40.0):
        res = spectral.g_omega_lattice_sum(sol, ell, k_end=3000.0)
        constants.append(abs(gw0 - res.value) * ell)
    assert max(constants) <= 100.0
    assert max(constants) / min(constants) < 1.5


def test_lattice_sum_zero_potential():
    sol = solve_scattering(pots.from_pieces([]), r_out=1.0)
    res = spectral.g_omega_lattice_sum(sol, 10.0)
    assert res.value == 0.0


def test_low_momentum_sum_scaling():
    sol = solve_scattering(pots.square_well(8.0, 1.0))
    a = sol.a
    ratios = []
    for ell_over_a in (20.0, 40.0):
        for k_h in (10.0, 20.0):
            ell = ell_over_a * a
            s = spectral.g_omega_low_sum(sol, ell, k_h)
            ratios.append(s * ell / (k_h * a ** 2))
    assert max(ratios) / min(ratios) < 3.0  # ~ C K_H a^2 / ell scaling
    assert max(ratios) < 200.0


def test_enumeration_budget_guard():
    with pytest.raises(ValueError):
        spectral.build_lattice(1000.0, 1.0, 400.0, budget=10_000)


def test_symbol_table_export(tmp_path):
    sol = solve_scattering(pots.square_well(8.0, 1.0))
    lat = spectral.build_lattice(20.0, 10.0, 1.2)
    path = tmp_path / "symbols.csv"
    rows = spectral.write_symbol_table(lat, sol, 1e-4, path)
    data = np.loadtxt(path, delimiter=",", skiprows=2)
    assert data.shape == (rows, 5)
    assert np.all(np.diff(data[:, 0]) > 0)          # sorted by |p|
    assert np.all(data[:, 2] <= data[:, 0] ** 2)    # tau <= p^2
    assert np.all((data[:, 4] >= 0) & (data[:, 4] < 1))
