import itertools
import math

import numpy as np
import pytest

from bosegas import neumann
from bosegas.util import gauss_legendre_panels

ELL = 4.0
RADIUS = 1.5


def test_mirror_identity_and_formula():
    x = np.array([0.0, 0.3, 0.7])
    np.testing.assert_allclose(neumann.mirror((0, 0, 0), x, ELL), x,
                               rtol=0, atol=1e-15)
    out = neumann.mirror((1, 0, 0), x, ELL)
    # (-1)(x - l/2) + l/2 + l at the first coordinate
    np.testing.assert_allclose(out, [2 * ELL - 0.0, 0.3, 0.7])


def test_mirror_expands_distances():
    rng = np.random.default_rng(5)
    x = rng.uniform(0, ELL, (40, 3))
    y = rng.uniform(0, ELL, (40, 3))
    base = np.linalg.norm(x - y, axis=1)
    for z in itertools.product((-1, 0, 1), repeat=3):
        moved = np.linalg.norm(neumann.mirror(z, x, ELL) - y, axis=1)
        assert np.all(moved >= base - 1e-12)


def test_mode_mirror_invariance():
    rng = np.random.default_rng(6)
    x = rng.uniform(0, ELL, (30, 3))
    for triple in [(0, 0, 0), (1, 0, 0), (2, 1, 0), (3, 1, 2)]:
        u = neumann.neumann_mode(triple, ELL)
        for z in itertools.product((-1, 0, 1), repeat=3):
            np.testing.assert_allclose(u(neumann.mirror(z, x, ELL)), u(x),
                                       rtol=0, atol=1e-12)


def test_modes_orthonormal():
    nodes, weights = gauss_legendre_panels(0.0, ELL, 4, order=16)
    grid = np.stack(np.meshgrid(nodes, nodes, nodes, indexing="ij"), axis=-1)
    w3 = weights[:, None, None] * weights[None, :, None] * weights[None, None, :]
    modes = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 0, 0), (2, 1, 1)]
    for p in modes:
        up = neumann.neumann_mode(p, ELL)(grid)
        for q in modes:
            uq = neumann.neumann_mode(q, ELL)(grid)
            val = float(np.sum(w3 * up * uq))
            assert abs(val - (1.0 if p == q else 0.0)) < 1e-10


def test_modes_are_laplacian_eigenfunctions():
    h = 1e-4
    x = np.array([[0.37, 1.21, 2.9]])
    for triple in [(1, 0, 0), (2, 1, 0), (3, 2, 1)]:
        u = neumann.neumann_mode(triple, ELL)
        lap = 0.0
        for axis in range(3):
            step = np.zeros(3)
            step[axis] = h
            lap += (u(x + step) - 2 * u(x) + u(x - step)) / h ** 2
        p2 = sum(v * v for v in triple) * (math.pi / ELL) ** 2
        assert abs(-lap[0] - p2 * u(x)[0]) < 1e-5 * max(abs(p2 * u(x)[0]), 1e-3)


def test_symmetrized_kernel_interior_and_symmetry():
    f = neumann.bump_kernel(RADIUS)
    rng = np.random.default_rng(7)
    x = rng.uniform(RADIUS, ELL - RADIUS, (6, 3))
    y = x + rng.uniform(-0.2, 0.2, (6, 3))
    direct = f(np.linalg.norm(x - y, axis=1))
    np.testing.assert_allclose(neumann.symmetrized_kernel(f, x, y, ELL, RADIUS),
                               direct, rtol=0, atol=1e-14)
    xb = rng.uniform(0, ELL, (40, 3))
    yb = rng.uniform(0, ELL, (40, 3))
    np.testing.assert_allclose(
        neumann.symmetrized_kernel(f, xb, yb, ELL, RADIUS),
        neumann.symmetrized_kernel(f, yb, xb, ELL, RADIUS), rtol=0, atol=1e-14)


def test_symmetrized_kernel_zero_and_support_guard():
    zero = neumann.symmetrized_kernel(lambda r: np.zeros_like(r),
                                      np.zeros((2, 3)), np.ones((2, 3)), ELL, RADIUS)
    assert np.all(zero == 0.0)
    with pytest.raises(ValueError):
        neumann.symmetrized_kernel(neumann.bump_kernel(3.0), np.zeros(3),
                                   np.zeros(3), ELL, 3.0)


def test_bump_transform_two_routes():
    f = neumann.bump_kernel(RADIUS)
    p = np.linspace(0.0, 9.0, 40)
    closed = neumann.bump_kernel_hat(p, RADIUS)
    quadrature = neumann.radial_fourier(f, RADIUS, p)
    np.testing.assert_allclose(quadrature, closed, rtol=0,
                               atol=1e-9 * abs(closed[0]))
    assert closed[0] == pytest.approx(64.0 * math.pi * RADIUS ** 3 / 315.0)


def test_diagonalization_small():
    f = neumann.bump_kernel(RADIUS)
    modes = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 0, 0)]
    rep = neumann.verify_diagonalization(f, RADIUS, ELL, modes=modes, n_gauss=72)
    f0 = float(rep.fhat[0])
    assert rep.off_diagonal_max < 1e-10 * f0
    assert rep.diagonal_rel_err < 1e-7
    assert rep.richardson < 1e-7 * f0
    # degenerate shell: same |p| for (1,0,0) and (0,1,0), still diagonal
    i, j = 1, 2
    assert abs(rep.matrix[i, j]) < 1e-10 * f0


def test_diagonalization_against_direct_six_dim_quadrature():
    # independent route: raw tensor-product quadrature of the symmetrized
    # kernel against mode pairs, at low order (the 6D rule's own accuracy)
    f = neumann.bump_kernel(RADIUS)
    modes = [(0, 0, 0), (1, 0, 0), (0, 1, 0)]
    rep = neumann.verify_diagonalization(f, RADIUS, ELL, modes=modes, n_gauss=72)
    nodes, weights = gauss_legendre_panels(0.0, ELL, 2, order=6)
    pts = np.stack(np.meshgrid(nodes, nodes, nodes, indexing="ij"),
                   axis=-1).reshape(-1, 3)
    w3 = (weights[:, None, None] * weights[None, :, None]
          * weights[None, None, :]).ravel()
    uvals = {m: neumann.neumann_mode(m, ELL)(pts) for m in modes}
    for (ip, p), (iq, q) in itertools.product(enumerate(modes), repeat=2):
        acc = 0.0
        for z in itertools.product((-1, 0, 1), repeat=3):
            moved = neumann.mirror(z, pts, ELL)
            for i0 in range(0, pts.shape[0], 432):
                d = moved[i0:i0 + 432, None, :] - pts[None, :, :]
                fv = f(np.sqrt((d * d).sum(-1)))
                acc += np.einsum("i,j,ij,i,j->", w3[i0:i0 + 432], w3, fv,
                                 uvals[p][i0:i0 + 432], uvals[q])
        assert acc == pytest.approx(rep.matrix[ip, iq],
                                    rel=2e-3, abs=2e-3 * float(rep.fhat[0]))
