"""Box free energy converging onto the thermodynamic formula.

Evaluates the finite-box energy per volume against the closed thermodynamic
expression at rho a^3 = 1e-6, T = rho a, and shows the 1/ell decay of the
difference. Also demonstrates the Lee-Huang-Yang integral and the lattice
ground-state identity behind the correction term.

Run:  python3 demos/free_energy_convergence.py
"""

import math

from bosegas import (LHY_COEFFICIENT, bog_sum_minus_integral, f_bog, f_thermo,
                     hard_core, lhy_integral, regularize, solve_scattering)
from bosegas.free_energy import lhy_closed_form

a, rho = 1.0, 1e-6
T = rho * a

print("== LHY integral: quadrature vs closed form ==")
for c in (1e-6, 1e-4):
    val = lhy_integral(c)
    ref = lhy_closed_form(c)
    print(f"  rho_z a = {c:7.1e}: integral = {val:.8e}, "
          f"64 pi^4 (128/15 sqrt(pi)) (rho_z a)^{{5/2}} = {ref:.8e}, "
          f"rel {abs(val - ref) / ref:.1e}")
print(f"  5/2-homogeneity: value(4c)/value(c) = {lhy_integral(4e-5) / lhy_integral(1e-5)!r}")

print("\n== box density vs thermodynamic density (T = rho a) ==")
target = f_thermo(rho, T, a)
print(f"  f(rho, T) = {target:.12e}")
prev = None
for ell in (16000.0, 32000.0, 64000.0, 128000.0):
    rep = f_bog(ell, rho * ell ** 3, a, T)
    err = abs(rep.total / ell ** 3 - target)
    note = f"   ratio {prev / err:.2f}" if prev else ""
    print(f"  ell = {ell:8.0f}: density err = {err:.3e}{note}")
    prev = err

print("\n== ground-state lattice sum vs the LHY density ==")
v, _ = regularize(hard_core(a), rho, 0.05)
sol = solve_scattering(v)
print("  rho_z^2 ghat-omega(0) + (1/ell^3) sum [sqrt(tau^2 + 2 tau x) - tau - x]")
print(f"  against 8 pi (128/15 sqrt(pi)) (rho_z a)^{{5/2}}"
      f" = {8 * math.pi * LHY_COEFFICIENT * (rho * a) ** 2.5:.4e}:")
for k_l in (4.0, 8.0, 16.0):
    ell = k_l / math.sqrt(rho * a)
    rep = bog_sum_minus_integral(ell, rho, sol, k_l ** 5)
    print(f"  K_l = {k_l:4.0f}: lhs/ref = {rep.lhs / rep.lhy_reference:8.4f} "
          f"(deficit shrinks like 1/K_l)")
