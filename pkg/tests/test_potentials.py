import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosegas import potentials as pots


def test_evaluate_hard_core():
    hc = pots.hard_core(1.0)
    assert hc.evaluate(0.5) == math.inf
    assert hc.evaluate(2.0) == 0.0
    assert hc.support_radius == 1.0


def test_evaluate_square_well():
    sw = pots.square_well(8.0, 1.0)
    assert sw.evaluate(0.5) == 8.0
    assert sw.evaluate(1.5) == 0.0
    np.testing.assert_allclose(sw.evaluate(np.array([0.2, 0.9, 1.1])), [8.0, 8.0, 0.0])


def test_evaluate_rejects_negative_radius():
    with pytest.raises(ValueError):
        pots.square_well(1.0, 1.0).evaluate(-0.1)


def test_min_cap_on_hard_core():
    capped = pots.pointwise_min_cap(pots.hard_core(1.0), 10.0)
    assert capped.pieces == ((0.0, 1.0, 10.0),)
    assert capped.support_radius == 1.0
    assert not capped.has_hard_core


def test_min_cap_no_op_and_lowering():
    sw = pots.square_well(8.0, 1.0)
    assert pots.pointwise_min_cap(sw, 10.0).pieces == sw.pieces
    lowered = pots.pointwise_min_cap(sw, 3.0)
    assert lowered.pieces == ((0.0, 1.0, 3.0),)


def test_min_cap_pointwise_monotone():
    pot = pots.from_pieces([(0.0, 0.3, 9.0), (0.3, 0.8, 4.0), (0.8, 1.0, 1.0)])
    capped = pots.pointwise_min_cap(pot, 3.5)
    r = np.linspace(0.0, 1.2, 301)
    v0, v1 = pot.evaluate(r), capped.evaluate(r)
    assert np.all(v1 <= v0 + 1e-15)
    assert np.all(np.where(v0 <= 3.5, v1 == v0, v1 == 3.5))
    assert capped.support_radius <= pot.support_radius


def test_tail_truncate_no_op_for_large_s():
    sw = pots.square_well(2.0, 1.0)
    out, r_s = pots.tail_truncate(sw, 1e6, 0.3)
    assert out.pieces == sw.pieces
    assert r_s == 0.0


def test_tail_truncate_half_integral():
    # target = half of int V on a constant well: (R^3 - R_S^3) = R^3/2
    sw = pots.square_well(100.0, 1.0)
    target = 0.5 * sw.integral()
    s = target / (8.0 * math.pi * 1.0)
    out, r_s = pots.tail_truncate(sw, s, 1.0)
    assert abs(r_s - 0.5 ** (1.0 / 3.0)) < 1e-12
    assert abs(out.integral() - target) < 1e-10 * target


def test_tail_truncate_reintegration():
    pot = pots.pointwise_min_cap(pots.hard_core(1.0), 1e4)
    a_v = 0.98
    s = 7.0
    out, r_s = pots.tail_truncate(pot, s, a_v)
    target = 8.0 * math.pi * s * a_v
    assert abs(out.integral() - target) < 1e-10 * target
    assert out.support_radius == pot.support_radius
    assert out.evaluate(0.5 * (r_s + 1.0)) == 1e4
    assert out.evaluate(0.5 * r_s) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.1, 50.0), min_size=1, max_size=5),
       st.floats(0.5, 40.0))
def test_cap_and_truncate_properties(values, cap):
    edges = np.linspace(0.2, 1.0, len(values) + 1)
    pot = pots.from_pieces([(edges[i], edges[i + 1], v)
                            for i, v in enumerate(values)])
    capped = pots.pointwise_min_cap(pot, cap)
    r = np.linspace(0.0, 1.1, 97)
    assert np.all(capped.evaluate(r) <= np.minimum(pot.evaluate(r), cap) + 1e-12)
    assert capped.support_radius <= pot.support_radius
    target_integral = 0.7 * pot.integral()
    out, _ = pots.tail_truncate(pot, target_integral / (8 * math.pi), 1.0)
    assert abs(out.integral() - min(pot.integral(), target_integral)) \
        <= 1e-10 * pot.integral()
    assert out.support_radius <= pot.support_radius


def test_from_samples_resamples_to_shells():
    r = np.linspace(0.0, 1.0, 33)
    v = 5.0 * (1.0 - r) ** 2
    pot = pots.from_samples(r, v, shells=256)
    assert len(pot.pieces) > 100
    mid = pot.evaluate(0.5)
    assert abs(mid - 5.0 * 0.25) < 0.05


def test_config_construction(tmp_path):
    assert pots.potential_from_config({"kind": "hardcore", "R": "1.5"}).core_radius == 1.5
    sw = pots.potential_from_config({"kind": "squarewell", "K": "8", "R": "1"})
    assert sw.pieces == ((0.0, 1.0, 8.0),)
    pw = pots.potential_from_config(
        {"kind": "piecewise", "shells": "0 0.5 12; 0.5 1 3"})
    assert pw.pieces == ((0.0, 0.5, 12.0), (0.5, 1.0, 3.0))
    table = tmp_path / "profile.txt"
    np.savetxt(table, np.column_stack([np.linspace(0, 1, 20),
                                       np.linspace(5, 0, 20)]))
    tab = pots.potential_from_config({"kind": "tabulated", "file": str(table),
                                      "shells": "64"})
    assert len(tab.pieces) > 10
    with pytest.raises(ValueError):
        pots.potential_from_config({"kind": "mystery"})


def test_invalid_pieces_rejected():
    with pytest.raises(ValueError):
        pots.RadialPotential(pieces=((0.0, 1.0, -1.0),))
    with pytest.raises(ValueError):
        pots.RadialPotential(core_radius=0.5, pieces=((0.0, 0.4, 1.0),))
    with pytest.raises(ValueError):
        pots.RadialPotential(pieces=((0.5, 0.5, 1.0),))
