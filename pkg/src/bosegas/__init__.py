"""Numerics for dilute Bose gases at low temperature.

Scattering lengths of strong (including hard-core) radial potentials, the
integrable-replacement construction, Neumann-box momentum lattices with
Bogoliubov dispersion, and the localized / thermodynamic free-energy
formulas, together with a verification suite for every computable identity.
"""

from .free_energy import (FreeEnergyReport, LHY_COEFFICIENT, box_assembly_bound,
                          bog_sum_minus_integral, chemical_potential,
                          convexity_check, f_bog, f_thermo, f_thermo_report,
                          lhy_integral, thermal_sum_compare)
from .neumann import (bump_kernel, bump_kernel_hat, mirror, neumann_mode,
                      symmetrized_kernel, verify_diagonalization)
from .potentials import (RadialPotential, from_pieces, from_samples, hard_core,
                         pointwise_min_cap, potential_from_config, square_well,
                         tail_truncate)
from .regimes import RegimeParams, check_constraints, derive
from .regularize import (RegularizationCertificate, Verdict, regularize,
                         verify_certificate)
from .scattering import (ScatteringSolution, fourier_hat, fourier_hat_many,
                         g_omega_zero, solve_scattering,
                         square_well_scattering_length, variational_energy)
from .spectral import (MomentumLattice, bogoliubov, build_lattice, c_factor,
                       g_omega_lattice_sum, g_omega_low_sum, shell_counts, tau,
                       write_symbol_table)

__all__ = [
    "FreeEnergyReport", "LHY_COEFFICIENT", "MomentumLattice", "RadialPotential",
    "RegimeParams", "RegularizationCertificate", "ScatteringSolution", "Verdict",
    "bog_sum_minus_integral", "bogoliubov", "box_assembly_bound", "build_lattice",
    "bump_kernel", "bump_kernel_hat", "c_factor", "chemical_potential",
    "check_constraints", "convexity_check", "derive", "f_bog", "f_thermo",
    "f_thermo_report", "fourier_hat", "fourier_hat_many", "from_pieces",
    "from_samples", "g_omega_lattice_sum", "g_omega_low_sum", "g_omega_zero",
    "hard_core", "lhy_integral", "mirror", "neumann_mode", "pointwise_min_cap",
    "potential_from_config", "regularize", "shell_counts", "solve_scattering",
    "square_well", "square_well_scattering_length", "symmetrized_kernel",
    "tail_truncate", "tau", "thermal_sum_compare", "variational_energy",
    "verify_certificate", "verify_diagonalization", "write_symbol_table",
]

__version__ = "0.1.0"
