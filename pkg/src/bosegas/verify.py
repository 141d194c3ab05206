"""Acceptance suite: every computable claim with its tolerance pinned.

Each criterion is a function returning a CriterionResult; the CLI `verify`
subcommand and the pytest acceptance module both run this registry, so there
is a single source of truth for what "passing" means.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import free_energy as fe
from . import neumann
from . import potentials as pots
from . import regimes
from . import spectral
from .regularize import regularize
from .scattering import (fourier_hat, g_omega_zero, solve_scattering,
                         square_well_scattering_length, variational_energy)

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all"]


@dataclass
class CriterionResult:
    ident: str
    title: str
    passed: bool
    details: list = field(default_factory=list)

    def summary_line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.ident}: {self.title}"


def _result(ident, title, checks, details):
    return CriterionResult(ident, title, all(checks), details)


# -- 1 ---------------------------------------------------------------------

def hard_core_scattering() -> CriterionResult:
    checks, details = [], []
    for radius in (0.5, 1.0, 2.0):
        t0 = time.perf_counter()
        sol = solve_scattering(pots.hard_core(radius))
        elapsed = time.perf_counter() - t0
        rel = abs(sol.a - radius) / radius
        checks += [rel < 1e-8, elapsed < 1.0]
        details.append(f"R={radius}: |a-R|/R={rel:.2e}, {elapsed * 1e3:.1f} ms")
    return _result("1", "hard-core scattering length equals the core radius",
                   checks, details)


# -- 2 ---------------------------------------------------------------------

def square_well_closed_form() -> CriterionResult:
    checks, details = [], []
    for gamma in (0.5, 1.0, 2.0, 5.0, 10.0):
        height = 2.0 * gamma ** 2
        a_ode = solve_scattering(pots.square_well(height, 1.0)).a
        a_ref = square_well_scattering_length(height, 1.0)
        rel = abs(a_ode - a_ref) / a_ref
        checks.append(rel < 1e-8)
        details.append(f"gamma={gamma}: rel={rel:.2e}")
    return _result("2", "square-well length matches the matching-condition root",
                   checks, details)


def _test_potentials():
    return [
        pots.hard_core(1.0),
        pots.square_well(2.0, 1.0),
        pots.square_well(8.0, 1.0),
        pots.pointwise_min_cap(pots.hard_core(1.0), 50.0),
        pots.from_pieces([(0.0, 0.5, 12.0), (0.5, 1.0, 3.0)]),
    ]


# -- 3 ---------------------------------------------------------------------

def variational_consistency() -> CriterionResult:
    checks, details = [], []
    for pot in _test_potentials():
        sol = solve_scattering(pot)
        energy = variational_energy(sol)
        rel = abs(energy - sol.a) / sol.a
        checks.append(rel < 1e-6)
        details.append(f"{pot.label}: rel={rel:.2e}")
    return _result("3", "variational energy equals the scattering length",
                   checks, details)


# -- 4 ---------------------------------------------------------------------

def born_identity() -> CriterionResult:
    checks, details = [], []
    candidates = _test_potentials()[1:]
    candidates.append(regularize(pots.hard_core(1.0), 1e-5, 0.05)[0])
    for pot in candidates:
        sol = solve_scattering(pot)
        ghat0 = fourier_hat(sol, 0.0)
        rel = abs(ghat0 - 8.0 * math.pi * sol.a) / (8.0 * math.pi * sol.a)
        checks.append(rel < 1e-6)
        details.append(f"{pot.label}: rel={rel:.2e}")
    return _result("4", "transform at zero momentum equals 8 pi a", checks, details)


# -- 5 ---------------------------------------------------------------------

def lhy_integral_value() -> CriterionResult:
    checks, details = [], []
    for c in (1e-6, 2.3e-4, 0.8):
        val = fe.lhy_integral(c)
        ref = fe.lhy_closed_form(c)
        rel = abs(val - ref) / ref
        checks.append(rel < 1e-6)
        details.append(f"rho_z a={c:g}: rel={rel:.2e}")
    ratio = fe.lhy_integral(4e-5) / fe.lhy_integral(1e-5)
    checks.append(abs(ratio - 32.0) <= 1e-12 * 32.0)
    details.append(f"homogeneity value(4c)/value(c)={ratio!r}")
    return _result("5", "LHY integral matches 64 pi^4 (128/15 sqrt(pi)) (rho_z a)^{5/2}",
                   checks, details)


# -- 6 ---------------------------------------------------------------------

def diagonalization() -> CriterionResult:
    ell, radius = 4.0, 1.5
    t0 = time.perf_counter()
    rep = neumann.verify_diagonalization(neumann.bump_kernel(radius), radius, ell)
    elapsed = time.perf_counter() - t0
    f0 = float(rep.fhat[0])
    off = rep.off_diagonal_max / f0
    diag = rep.diagonal_rel_err
    checks = [off < 1e-8, diag < 1e-6, elapsed < 60.0]
    details = [f"off-diagonal max / fhat(0) = {off:.2e}",
               f"diagonal rel err = {diag:.2e}",
               f"richardson = {rep.richardson:.2e}, {elapsed:.1f} s, "
               f"{len(rep.modes)} modes"]
    return _result("6", "symmetrized kernel diagonalizes in the Neumann basis",
                   checks, details)


# -- 7 ---------------------------------------------------------------------

def regularization_pipeline() -> CriterionResult:
    eta = 0.05
    checks, details = [], []
    gap_constants, dominance = [], []
    for x in (1e-4, 1e-5, 1e-6):
        rho = x
        v, cert = regularize(pots.hard_core(1.0), rho, eta)
        ell = cert.pipeline["ell"]
        grid = np.linspace(0.0, 1.2, 2001)
        below = np.all(v.evaluate(grid) <= pots.hard_core(1.0).evaluate(grid) + 1e-9)
        sup_exact = abs(cert.sup_value - ell ** 2) <= 1e-12 * ell ** 2
        gap_c = cert.a_gap * ell
        gap_constants.append(gap_c)
        dominance.append(cert.g_dominance_constant)
        checks += [below, sup_exact, gap_c <= 10.0, math.isfinite(cert.g_dominance_constant)]
        details.append(f"x={x:g}: v<=V {below}, sup exact {sup_exact}, "
                       f"gap*l/a^2={gap_c:.3f}, dominance C={cert.g_dominance_constant:.3f}")
    mid = 0.5 * (max(dominance) + min(dominance))
    spread = (max(dominance) - min(dominance)) / mid
    checks.append(spread <= 0.4)  # each value within +-20% of the midrange
    details.append(f"dominance spread = {spread:.3f} (each within 20% of midrange)")
    return _result("7", "integrable replacement of the hard core", checks, details)


# -- 8 ---------------------------------------------------------------------

def cap_loss_bound() -> CriterionResult:
    checks, details = [], []
    grid_v = [pots.hard_core(1.0), pots.square_well(50.0, 1.0),
              pots.square_well(200.0, 0.8)]
    for pot in grid_v:
        a_full = solve_scattering(pot).a
        for cap in (10.0, 40.0, 160.0):
            a_cap = solve_scattering(pots.pointwise_min_cap(pot, cap)).a
            loss = a_full - a_cap
            bound = 2.0 * math.sqrt(2.0) / math.sqrt(cap)
            checks += [loss >= -1e-12, loss <= bound]
            details.append(f"{pot.label}, K={cap:g}: loss={loss:.4f} <= {bound:.4f}")
    return _result("8", "capping loses at most 2 sqrt(2)/sqrt(K) of scattering length",
                   checks, details)


# -- 9 ---------------------------------------------------------------------

def lattice_sum_identity() -> CriterionResult:
    sol = solve_scattering(pots.square_well(8.0, 1.0))
    a = sol.a
    gw0 = g_omega_zero(sol)
    constants = []
    details = []
    for ell_over_a in (10.0, 20.0, 40.0, 80.0, 160.0):
        ell = ell_over_a * a
        res = spectral.g_omega_lattice_sum(sol, ell)
        c = abs(gw0 - res.value) * ell / a ** 2
        constants.append(c)
        details.append(f"ell={ell_over_a:g}a: |gw0 - S| * ell/a^2 = {c:.4f}")
    stable = max(constants) / min(constants)
    checks = [max(constants) <= 100.0, stable <= 2.0]
    details.append(f"max/min = {stable:.4f} (O(a^2/ell) decay means ~constant)")
    return _result("9", "ghat-omega(0) equals the signed lattice sum up to O(a^2/ell)",
                   checks, details)


# -- 10 --------------------------------------------------------------------

def thermodynamic_convergence() -> CriterionResult:
    a, rho = 1.0, 1e-6
    T = rho * a
    target = fe.f_thermo(rho, T, a)
    errors = []
    details = []
    for ell in (16000.0, 32000.0, 64000.0, 128000.0):
        n = rho * ell ** 3
        err = abs(fe.f_bog(ell, n, a, T).total / ell ** 3 - target)
        errors.append(err)
        details.append(f"ell={ell:g}: |f_box/ell^3 - f| = {err:.3e}")
    checks = []
    for e0, e1 in zip(errors, errors[1:]):
        ratio = e0 / e1
        checks.append(1.4 <= ratio <= 2.6)
        details.append(f"doubling ratio = {ratio:.3f}")
    return _result("10", "box density converges to the thermodynamic formula like 1/ell",
                   checks, details)


# -- 11 --------------------------------------------------------------------

def convexity() -> CriterionResult:
    a, ell = 1.0, 4000.0
    rho_samples = np.linspace(1e-6, 3e-6, 10)
    checks, details = [], []

    def decade_constants(center, which):
        consts = []
        for T in center * 10.0 ** np.linspace(-0.5, 0.5, 5):
            rep = fe.convexity_check(ell, a, T, rho_samples)
            checks.append(rep.gate_ok)
            scale1 = float(np.max(np.abs(rep.first)))
            scale2 = float(np.max(np.abs(rep.second)))
            checks.append(bool(np.all(rep.first >= -1e-12 * scale1)))
            checks.append(bool(np.all(-rep.second >= -1e-10 * scale2)))
            consts.append(float(np.max(rep.first_constants if which == 1
                                       else rep.second_constants)))
        mid = 0.5 * (max(consts) + min(consts))
        spread = (max(consts) - min(consts)) / mid
        checks.append(spread <= 0.6)  # every value within +-30% of the midrange
        details.append(f"derivative {which}: decade at T~{center:g}, "
                       f"constants {min(consts):.4g}..{max(consts):.4g}, "
                       f"spread {spread:.3f}")

    decade_constants(1.93e-5, 1)
    decade_constants(1.0e-5, 2)
    return _result("11", "thermal sum is increasing and concave in the density",
                   checks, details)


# -- 12 --------------------------------------------------------------------

def chemical_potential_sweep() -> CriterionResult:
    a, eta = 1.0, 0.05
    devs = []
    details = []
    for x in np.geomspace(1e-6, 1e-5, 5):
        rho = x / a ** 3
        ell = x ** (-eta) / math.sqrt(rho * a)
        rep = fe.chemical_potential(ell, rho, a, rho * a)
        dev = abs(rep.mu - 8.0 * math.pi * a * rho) / (rho * a)
        devs.append(dev)
        details.append(f"rho a^3={x:.2e}: |mu - 8 pi a rho|/(rho a) = {dev:.5f}, "
                       f"gate {rep.gate_ok}")
    checks = [devs[i] < devs[i + 1] for i in range(len(devs) - 1)]
    details.append("monotone decreasing toward diluteness: "
                   + ("yes" if all(checks) else "no"))
    return _result("12", "mu approaches 8 pi a rho in the dilute limit", checks, details)


# -- 13 --------------------------------------------------------------------

def grand_canonical_assembly() -> CriterionResult:
    a, rho = 1.0, 1e-6
    ell = (50.0 / rho) ** (1.0 / 3.0)
    T = 1e-6 * rho * a
    n_cap = int(math.ceil(20.0 * rho * ell ** 3))
    rep = fe.box_assembly_bound(2.0 * ell, int(round(rho * (2 * ell) ** 3)),
                                ell, a, T, n_cap=n_cap)
    rel = abs(rep.bound - rep.reference) / abs(rep.reference)
    single = fe.box_assembly_bound(ell, 50, ell, a, T, n_cap=n_cap)
    f_box = fe.f_bog(ell, 50.0, a, T).total
    slack = f_box - single.bound
    checks = [rep.termwise_min_gap >= -1e-15 * abs(rep.reference),
              rel < 1e-6,
              slack >= -1e-15 * abs(f_box),
              slack <= T * math.log(rep.n_cap + 1)]
    details = [f"termwise min gap = {rep.termwise_min_gap:.3e}",
               f"T->0 bound vs M F(ell, rho ell^3): rel = {rel:.2e}",
               f"single box slack = {slack:.3e} <= T log(N+1) = "
               f"{T * math.log(rep.n_cap + 1):.3e}"]
    return _result("13", "grand-canonical assembly collapses onto the convex hull",
                   checks, details)


# -- 14 --------------------------------------------------------------------

def regime_checker() -> CriterionResult:
    checks, details = [], []
    etas = np.linspace(1e-6, 1.0 / 1026.0 - 1e-9, 200)
    all_pass = True
    for eta in etas:
        p = regimes.derive(1e-6, 1.0, 0.9e-6 * (1e-6) ** (-eta / 4.0), eta, eta / 4.0)
        if any(not v.passed for v in regimes.check_constraints(p)):
            all_pass = False
            break
    checks.append(all_pass)
    details.append(f"dense eta sweep in (0, 1/1026): all constraints pass: {all_pass}")
    p_bad = regimes.derive(1e-6, 1.0, 1e-6, 1e-3, 1e-4)
    failed = [v.name for v in regimes.check_constraints(p_bad) if not v.passed]
    checks.append("eta-window" in failed)
    details.append(f"eta=1e-3 fails: {failed}")
    return _result("14", "schedule constraints pass inside the window and fail outside",
                   checks, details)


CRITERIA = {
    "1": hard_core_scattering,
    "2": square_well_closed_form,
    "3": variational_consistency,
    "4": born_identity,
    "5": lhy_integral_value,
    "6": diagonalization,
    "7": regularization_pipeline,
    "8": cap_loss_bound,
    "9": lattice_sum_identity,
    "10": thermodynamic_convergence,
    "11": convexity,
    "12": chemical_potential_sweep,
    "13": grand_canonical_assembly,
    "14": regime_checker,
}


def run_criterion(ident: str) -> CriterionResult:
    return CRITERIA[ident]()


def run_all(idents=None):
    idents = list(CRITERIA) if idents is None else list(idents)
    return [run_criterion(i) for i in idents]
