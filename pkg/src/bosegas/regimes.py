"""Parameter schedule and regime constraints for the dilute low-temperature box.

All scales derive from the diluteness x = rho a^3 and the exponent eta:

    K_l = x^{-eta},  ell = K_l (rho a)^{-1/2},  K_H = K_l^5,
    gamma = 20 eta,  alpha = 1/4 + eta/2,  M_loc = rho ell^3 K_l^{-21},
    m = 10 / eta.

Constraints split into two kinds: "exact" ones are constant-free inequalities
checked as written; "structural" ones carry an unnamed order-one constant in
the source hypothesis and are evaluated at C = 1, so a structural failure
means the scaling is violated, not the hypothesis itself. Powers are formed
in log space: x^{-21 eta} overflows naive evaluation on wide sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .regularize import Verdict

__all__ = ["RegimeParams", "derive", "check_constraints"]


@dataclass(frozen=True)
class RegimeParams:
    """Inputs plus derived scales, recomputed on access (never stored stale)."""

    rho: float
    a: float
    T: float
    eta: float
    nu: float

    def __post_init__(self):
        if min(self.rho, self.a, self.eta, self.nu) <= 0 or self.T < 0:
            raise ValueError("rho, a, eta, nu must be > 0 and T >= 0")
        if not self.diluteness < 1.0:
            raise ValueError("need rho a^3 < 1")

    @property
    def diluteness(self) -> float:
        return self.rho * self.a ** 3

    @property
    def log_x(self) -> float:
        return math.log(self.diluteness)

    @property
    def K_l(self) -> float:
        return math.exp(-self.eta * self.log_x)

    @property
    def ell(self) -> float:
        return self.K_l / math.sqrt(self.rho * self.a)

    @property
    def K_H(self) -> float:
        return math.exp(-5.0 * self.eta * self.log_x)

    @property
    def gamma(self) -> float:
        return 20.0 * self.eta

    @property
    def alpha(self) -> float:
        return 0.25 + 0.5 * self.eta

    @property
    def m(self) -> float:
        return 10.0 / self.eta

    @property
    def M_loc(self) -> float:
        return self.rho * self.ell ** 3 * math.exp(21.0 * self.eta * self.log_x)


def derive(rho: float, a: float, T: float, eta: float, nu: float) -> RegimeParams:
    return RegimeParams(rho=rho, a=a, T=T, eta=eta, nu=nu)


def check_constraints(params: RegimeParams):
    """Evaluate every scalar hypothesis of the low-temperature regime.

    Exact constraints compare log-space quantities directly; structural ones
    are labeled as such and judged at unit constant.
    """
    p = params
    lx = p.log_x  # negative in the dilute regime
    out = []

    def exact(name, passed, observed, bound, note=""):
        out.append(Verdict(name, "exact", bool(passed), float(observed),
                           float(bound), note))

    def structural(name, passed, observed, bound, note=""):
        out.append(Verdict(name, "structural", bool(passed), float(observed),
                           float(bound), note))

    exact("eta-window", p.eta < 1.0 / 1026.0, p.eta, 1.0 / 1026.0,
          note="small-eta hypothesis of the localized bound")
    exact("nu-window", p.nu < p.eta / 3.0, p.nu, p.eta / 3.0,
          note="temperature exponent below eta/3")
    # T <= rho a x^{-nu}, in logs: log T <= log(rho a) - nu log x
    log_T_bound = math.log(p.rho * p.a) - p.nu * lx
    exact("temperature-ceiling", math.log(max(p.T, 1e-300)) <= log_T_bound,
          math.log(max(p.T, 1e-300)), log_T_bound,
          note="log T vs log(rho a (rho a^3)^-nu)")
    # K_l K_H^3 <= x^{-1/2}: exponents -eta - 15 eta >= -1/2
    exact("cutoff-product", 16.0 * p.eta <= 0.5, 16.0 * p.eta, 0.5,
          note="K_l K_H^3 within x^{-1/2} (exponent form)")
    exact("m-floor", p.m > 2.0 / p.eta + 14.0, p.m, 2.0 / p.eta + 14.0,
          note="coherent-state moment order")
    # K_H <= K_l^{(m+1)/12}: 5 <= (m+1)/12
    exact("high-cutoff-vs-moments", 5.0 <= (p.m + 1.0) / 12.0, 5.0,
          (p.m + 1.0) / 12.0, note="K_H below K_l^{(m+1)/12} (exponent form)")
    exact("condensation-exponent", p.alpha + 2.5 * p.nu < 6.0 / 17.0,
          p.alpha + 2.5 * p.nu, 6.0 / 17.0,
          note="alpha + 5 nu / 2 below 6/17")
    structural("high-cutoff-floor", 5.0 * p.eta >= 4.0 * p.eta,
               5.0 * p.eta, 4.0 * p.eta,
               note="K_H >= C K_l^4 at C = 1 (exponent form)")
    # K_l^{5/4} K_H^2 <= C^{-1} x^{-1/2}: exponents (5/4 + 10) eta <= 1/2
    structural("triple-term-budget", 11.25 * p.eta <= 0.5, 11.25 * p.eta, 0.5,
               note="K_l^{5/4} K_H^2 within x^{-1/2} at C = 1 (exponent form)")
    # sqrt(ell / a) ceiling on K_H: 5 eta <= 1/4 + eta/2
    structural("high-cutoff-ceiling", 5.0 * p.eta <= 0.25 + 0.5 * p.eta,
               5.0 * p.eta, 0.25 + 0.5 * p.eta,
               note="K_H below sqrt(ell/a) (exponent form)")
    # M_loc <= C^{-1} rho ell^3 K_H^{-3} K_l^{-17/4}: 21 >= 15 + 17/4
    structural("localization-number", 21.0 >= 15.0 + 17.0 / 4.0, 21.0,
               15.0 + 17.0 / 4.0,
               note="M_loc within rho ell^3 K_H^{-3} K_l^{-17/4} at C = 1")
    return out
