import math

import numpy as np
import pytest

from bosegas import potentials as pots
from bosegas.regularize import regularize, verify_certificate
from bosegas.scattering import solve_scattering


def test_hard_core_pipeline_structure():
    rho, eta = 1e-6, 0.05
    v, cert = regularize(pots.hard_core(1.0), rho, eta)
    ell = cert.pipeline["ell"]
    # shape: an inner fill plus a thin strong shell reaching the core radius
    assert len(v.pieces) == 2
    fill, shell = v.pieces
    assert shell[2] == pytest.approx(ell ** 2, rel=1e-12)   # cap level exactly
    assert shell[1] == 1.0                                   # support preserved
    # the fill sits at min(g peak, M) with M = ell / R_S^3 ~ ell / a^3
    m_level = cert.pipeline["M"]
    assert fill[2] <= m_level * (1 + 1e-12)
    assert fill[2] == pytest.approx(m_level, rel=0.05)
    assert cert.sup_value == pytest.approx(ell ** 2, rel=1e-12)
    assert not cert.flags


def test_hard_core_pipeline_certificate():
    rho, eta = 1e-5, 0.05
    v, cert = regularize(pots.hard_core(1.0), rho, eta)
    ell = cert.pipeline["ell"]
    assert 0.0 <= cert.a_gap < 1.0
    assert cert.a_gap * ell <= 10.0
    assert math.isfinite(cert.g_dominance_constant)
    # v <= V pointwise (V infinite inside the core)
    r = np.linspace(0.0, 1.5, 601)
    assert np.all(v.evaluate(r) <= pots.hard_core(1.0).evaluate(r) + 1e-9)
    verdicts = {vd.name: vd for vd in verify_certificate(cert, rho, eta)}
    assert verdicts["sup-bound"].passed
    assert verdicts["g-dominance"].passed
    # gap verdict is constant-free as stated; the construction carries a
    # hidden constant ~ sqrt(2), so the reported ratio sits just above 1
    assert 1.0 < verdicts["scattering-length-gap"].observed \
        / verdicts["scattering-length-gap"].bound < 3.0


def test_gap_rate_constant_across_diluteness():
    eta = 0.05
    rates = []
    for x in (1e-4, 1e-5, 1e-6):
        _, cert = regularize(pots.hard_core(1.0), x, eta)
        rates.append(cert.a_gap * cert.pipeline["ell"])
    assert max(rates) <= 10.0
    assert max(rates) / min(rates) < 1.05  # a_gap ~ C a^2 / ell with stable C


def test_trivial_pass_through():
    weak = pots.square_well(0.5, 1.0)
    v, cert = regularize(weak, 1e-6, 0.05)
    assert v.pieces == weak.pieces
    assert cert.a_gap == 0.0
    assert "cap-inactive" in cert.flags and "truncation-noop" in cert.flags
    verdicts = verify_certificate(cert, 1e-6, 0.05)
    assert all(vd.passed for vd in verdicts)


def test_square_well_far_above_cap_reduces_to_capping():
    tall = pots.square_well(1e9, 1.0)
    v, cert = regularize(tall, 1e-6, 0.05)
    cap = cert.pipeline["cap"]
    a_tall = solve_scattering(tall).a
    assert cert.a_original == pytest.approx(a_tall, rel=1e-12)
    assert 0.0 <= cert.a_gap <= 2.0 * math.sqrt(2.0) / math.sqrt(cap)
    assert cert.sup_value <= cap * (1 + 1e-12)


def test_g_of_replacement_is_nondecreasing_inside():
    v, cert = regularize(pots.hard_core(1.0), 1e-5, 0.05)
    sol = solve_scattering(v)
    r_s = cert.pipeline["R_S"]
    r = np.linspace(1e-3, r_s * (1 - 1e-9), 400)
    g = sol.g_at(r)
    assert np.all(np.diff(g) >= -1e-9 * np.max(g))


def test_degenerate_shell_flag():
    # at rho a^3 near 1 the box is barely larger than the core and the
    # eps-extension swallows the whole truncated support
    v, cert = regularize(pots.hard_core(1.0), 0.9, 0.05)
    assert "degenerate-shell" in cert.flags
    assert v.integral() < math.inf


def test_rejects_increasing_profile():
    rising = pots.from_pieces([(0.0, 0.5, 1.0), (0.5, 1.0, 5.0)])
    with pytest.raises(ValueError):
        regularize(rising, 1e-6, 0.05)


def test_dominance_constant_scan_matches_direct():
    v, cert = regularize(pots.hard_core(1.0), 1e-5, 0.05)
    sol = solve_scattering(v)
    rng = np.random.default_rng(11)
    xs = rng.uniform(0.0, 1.0, 300)
    ys = np.maximum(xs, rng.uniform(0.0, 1.0, 300))
    ratios = sol.g_at(ys) / v.evaluate(xs)
    assert np.max(ratios) <= cert.g_dominance_constant * 1.05
