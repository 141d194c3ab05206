"""Independent-route checks of the numerical machinery.

Each test re-derives a quantity with a method sharing no code with the
library path: a generic ODE integrator for the scattering length of a smooth
profile, direct meshgrid enumeration for shell-reduced lattice sums, and a
brute octant count for the signed dimension-split identity.
"""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from bosegas import free_energy as fe
from bosegas import potentials as pots
from bosegas import spectral
from bosegas.scattering import solve_scattering
from bosegas.util import smoothstep_window


def smooth_profile(height, radius):
    def v(r):
        t = 1.0 - (r / radius) ** 2
        return height * np.maximum(t, 0.0) ** 2

    return v


def ode_scattering_length(v, radius, rtol=1e-12):
    def rhs(r, y):
        return [y[1], 0.5 * v(r) * y[0]]

    r0 = 1e-10
    sol = solve_ivp(rhs, (r0, radius), [r0, 1.0], rtol=rtol, atol=1e-14,
                    method="DOP853")
    u, du = sol.y[0][-1], sol.y[1][-1]
    return radius - u / du


def test_resampled_smooth_potential_matches_generic_ode():
    # the table must be dense enough that the linear interpolant's own
    # length offset (~h_tab^2) sits below the shell-resampling error floor
    height, radius = 30.0, 1.0
    v = smooth_profile(height, radius)
    reference = ode_scattering_length(v, radius)
    r_tab = np.linspace(0.0, radius, 20001)
    errs = []
    for shells in (1024, 4096):
        pot = pots.from_samples(r_tab, v(r_tab), shells=shells)
        errs.append(abs(solve_scattering(pot).a - reference))
    assert errs[-1] / reference < 5e-6
    # midpoint resampling converges at second order: ~16x per 4x refinement
    assert errs[0] / errs[1] > 8.0


def test_thermal_shells_match_meshgrid_enumeration():
    ell, rho, a, T = 40.0, 1e-3, 1.0, 4e-3
    value, diag = fe.thermal_log_sum(ell, rho, a, T)
    p_max = diag["p_max"]
    n_max = int(p_max * ell / math.pi)
    r = np.arange(n_max + 1)
    i, j, k = np.meshgrid(r, r, r, indexing="ij")
    p = np.sqrt(i ** 2 + j ** 2 + k ** 2).ravel() * math.pi / ell
    p = p[(p > 0) & (p <= p_max)]
    omega = p * np.sqrt(p * p + 16 * math.pi * a * rho)
    brute = T * math.fsum(np.log1p(-np.exp(-omega / T)).tolist())
    assert value == pytest.approx(brute, rel=1e-13)


def test_lattice_sum_head_matches_signed_enumeration():
    sol = solve_scattering(pots.square_well(8.0, 1.0))
    ell = 8.0 * sol.a
    res = spectral.g_omega_lattice_sum(sol, ell)
    p1, p2 = res.window
    n_max = int(p2 * ell / math.pi)
    r = np.arange(-n_max, n_max + 1)
    i, j, k = np.meshgrid(r, r, r, indexing="ij")
    p = np.sqrt(i ** 2 + j ** 2 + k ** 2).ravel() * math.pi / ell
    p = p[(p > 0) & (p <= p2)]
    from bosegas.scattering import fourier_hat_many
    ghat = fourier_hat_many(sol, p)
    brute = math.fsum((ghat ** 2 / (2 * p ** 2)
                       * smoothstep_window(p, p1, p2)).tolist()) / (8 * ell ** 3)
    assert res.lattice_part == pytest.approx(brute, rel=1e-12)


def test_octant_decomposition_identity():
    # sum over N0^3 \ 0 of a radial f equals
    # (1/8) sum_{Z^3\0} + (3/8) sum_{Z^2\0} + (3/8) sum_{Z\0}
    rng = np.random.default_rng(17)
    weights = rng.uniform(0.5, 2.0, 200)

    def f(msq):
        return weights[np.minimum(msq, 199)] / (1.0 + msq)

    n = 7
    r = np.arange(0, n + 1)
    i, j, k = np.meshgrid(r, r, r, indexing="ij")
    msq = (i ** 2 + j ** 2 + k ** 2).ravel()
    octant = f(msq[msq > 0]).sum()

    def signed_sum(dim):
        rr = np.arange(-n, n + 1)
        grids = np.meshgrid(*([rr] * dim), indexing="ij")
        m = sum(g ** 2 for g in grids).ravel()
        return f(m[m > 0]).sum()

    combo = (signed_sum(3) / 8.0 + 3.0 * signed_sum(2) / 8.0
             + 3.0 * signed_sum(1) / 8.0)
    assert octant == pytest.approx(combo, rel=1e-13)


def test_shellcount_path_of_bog_sum_matches_brute():
    # small box, square well (compact transform): the library's windowed
    # heads plus continuum tails agree with a direct octant enumeration of
    # the raw summand carried far past the window
    sol = solve_scattering(pots.square_well(8.0, 1.0))
    ell, rho_z, k_h = 60.0, 1e-4, 32.0
    rep = fe.bog_sum_minus_integral(ell, rho_z, sol, k_h)
    hi = max(25.0 * math.sqrt(16 * math.pi * rho_z * sol.a), 40.0 * math.pi / ell)
    n_max = int(6.0 * hi * ell / math.pi)
    r = np.arange(0, n_max + 1)
    i, j, k = np.meshgrid(r, r, r, indexing="ij")
    p = np.sqrt(i ** 2 + j ** 2 + k ** 2).ravel() * math.pi / ell
    p = p[p > 0]
    from bosegas.scattering import fourier_hat_many, g_omega_zero
    from bosegas.spectral import tau_radial
    t = tau_radial(p, ell, k_h)
    x = rho_z * fourier_hat_many(sol, p)
    brute = math.fsum(np.sort(fe.sqrt_shift_deficit(t, x)).tolist()) / ell ** 3
    lib_sum = rep.lhs - rho_z ** 2 * g_omega_zero(sol)
    # the brute enumeration still misses a ~0.1% transform tail beyond 6*hi
    assert lib_sum == pytest.approx(brute, rel=5e-3)
