"""Radial, non-negative, compactly supported interaction potentials.

The canonical internal representation is piecewise-constant in the radius:
every construction used downstream (capping, tail truncation, shell fills)
is exactly closed on that family, and the zero-energy scattering problem
admits exact per-piece propagators. A hard core is stored structurally via
``core_radius`` rather than as a large finite value, so ``min(V, K)`` and the
scattering solver treat it exactly.

Units: lengths are arbitrary but consistent; potential values carry
1/length^2 (hbar = 2m = 1 convention).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RadialPotential",
    "hard_core",
    "square_well",
    "from_pieces",
    "from_samples",
    "pointwise_min_cap",
    "tail_truncate",
    "potential_from_config",
]

_MERGE_TOL = 1e-15


@dataclass(frozen=True)
class RadialPotential:
    """Piecewise-constant radial profile with an optional hard core.

    pieces are (r_lo, r_hi, value) with value >= 0, disjoint, sorted, and
    lying at radii >= core_radius. ``evaluate`` returns ``math.inf`` strictly
    inside the core and never a finite stand-in.
    """

    core_radius: float = 0.0
    pieces: tuple = ()
    label: str = ""
    support_radius: float = field(init=False, default=0.0)

    def __post_init__(self):
        if self.core_radius < 0:
            raise ValueError("core_radius must be >= 0")
        pieces = tuple(tuple(float(x) for x in p) for p in self.pieces)
        prev_hi = self.core_radius
        for (lo, hi, val) in pieces:
            if lo < prev_hi - 1e-12 * max(1.0, prev_hi):
                raise ValueError(f"pieces overlap or precede the core at r={lo}")
            if hi <= lo:
                raise ValueError(f"empty piece [{lo}, {hi})")
            if val < 0:
                raise ValueError("potential values must be >= 0")
            prev_hi = hi
        support = self.core_radius
        for (lo, hi, val) in pieces:
            if val > 0:
                support = hi
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "support_radius", float(support))

    # -- evaluation ------------------------------------------------------

    def evaluate(self, r):
        """V(r); +inf strictly inside the hard core, array-friendly."""
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < 0):
            raise ValueError("radius must be >= 0")
        out = np.zeros_like(r_arr)
        for (lo, hi, val) in self.pieces:
            out = np.where((r_arr >= lo) & (r_arr < hi), val, out)
        if self.core_radius > 0:
            out = np.where(r_arr < self.core_radius, np.inf, out)
        if np.isscalar(r) or r_arr.ndim == 0:
            return float(out)
        return out

    @property
    def has_hard_core(self) -> bool:
        return self.core_radius > 0

    def max_value(self) -> float:
        """sup V over r > 0 (inf for a hard core)."""
        if self.has_hard_core:
            return np.inf
        return max((val for (_, _, val) in self.pieces), default=0.0)

    # -- exact radial integrals -----------------------------------------

    def integral(self) -> float:
        """Integral of V over R^3: 4*pi*sum of exact shell integrals; inf for a hard core."""
        if self.has_hard_core:
            return np.inf
        return self.integral_outside(0.0)

    def integral_outside(self, r0: float) -> float:
        """4*pi * int_{r0}^inf V(r) r^2 dr via the exact shell formula."""
        total = 0.0
        for (lo, hi, val) in self.pieces:
            a = max(lo, r0)
            if a >= hi or val == 0.0:
                continue
            total += val * (hi ** 3 - a ** 3)
        return total * (4.0 * np.pi / 3.0)

    def breakpoints(self):
        """Sorted radii where the profile may jump (core, piece edges)."""
        pts = {self.core_radius} if self.core_radius > 0 else {0.0}
        for (lo, hi, _) in self.pieces:
            pts.add(lo)
            pts.add(hi)
        return sorted(pts)


def _merged(pieces):
    """Drop empty pieces and merge adjacent pieces of equal value."""
    out = []
    for (lo, hi, val) in pieces:
        if hi - lo <= 0:
            continue
        if out and abs(out[-1][2] - val) <= _MERGE_TOL * max(1.0, abs(val)) \
                and abs(out[-1][1] - lo) <= 1e-14 * max(1.0, lo):
            out[-1] = (out[-1][0], hi, out[-1][2])
        else:
            out.append((lo, hi, val))
    return tuple(out)


def hard_core(radius: float) -> RadialPotential:
    """V = +inf for r <= radius, 0 beyond; scattering length equals the radius."""
    return RadialPotential(core_radius=radius, pieces=(), label=f"hardcore(R={radius:g})")


def square_well(height: float, radius: float) -> RadialPotential:
    """V = height on [0, radius), 0 beyond."""
    return RadialPotential(core_radius=0.0, pieces=((0.0, radius, height),),
                           label=f"squarewell(K={height:g},R={radius:g})")


def from_pieces(pieces, core_radius: float = 0.0, label: str = "piecewise") -> RadialPotential:
    return RadialPotential(core_radius=core_radius, pieces=_merged(sorted(pieces)), label=label)


def from_samples(r, v, shells: int = 4096, label: str = "tabulated") -> RadialPotential:
    """Resample a tabulated profile (piecewise-linear in between samples)
    onto ``shells`` equal piecewise-constant shells covering [0, max r].

    Shell values are the midpoint values of the linear interpolant; the
    sampled profile must be non-negative and vanish at its last sample.
    """
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    if r.ndim != 1 or r.shape != v.shape or r.size < 2:
        raise ValueError("need matching 1D arrays with at least two samples")
    if np.any(np.diff(r) <= 0):
        raise ValueError("sample radii must be strictly increasing")
    if np.any(v < 0):
        raise ValueError("sampled potential must be >= 0")
    edges = np.linspace(0.0, r[-1], shells + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    vals = np.interp(mids, r, v, left=v[0], right=0.0)
    pieces = [(edges[i], edges[i + 1], vals[i]) for i in range(shells) if vals[i] > 0]
    return from_pieces(pieces, label=label)


# -- constructions ------------------------------------------------------


def pointwise_min_cap(pot: RadialPotential, cap: float) -> RadialPotential:
    """min(V, K): a hard core of radius r_c becomes a constant-K plateau on [0, r_c].

    The support radius never grows; scattering length can only decrease.
    """
    if cap <= 0:
        raise ValueError("cap must be > 0")
    pieces = []
    if pot.core_radius > 0:
        pieces.append((0.0, pot.core_radius, cap))
    for (lo, hi, val) in pot.pieces:
        pieces.append((lo, hi, min(val, cap)))
    return RadialPotential(core_radius=0.0, pieces=_merged(pieces),
                           label=f"min({pot.label or 'V'},{cap:g})")


def tail_truncate(pot: RadialPotential, s: float, a_v: float):
    """Outer-shell restriction V -> V * 1_{[R_S, inf)} keeping integral 8*pi*S*a(V).

    If the full integral is already <= 8*pi*S*a(V) the potential is returned
    unchanged with R_S equal to the core radius. Otherwise R_S is the root of
    the cumulative outer integral 4*pi int_{R_S}^{R} V r^2 dr = 8*pi*S*a(V),
    solved exactly on the piecewise-cubic cumulative function.

    Requires an integrable profile (no hard core). Returns (potential, R_S).
    """
    if pot.has_hard_core:
        raise ValueError("tail truncation needs an integrable potential; cap the core first")
    if s <= 0:
        raise ValueError("S must be > 0")
    target = 8.0 * np.pi * s * a_v
    total = pot.integral()
    if total <= target:
        return pot, pot.core_radius
    # walk pieces from the outside in until the outer integral reaches target
    outer = 0.0
    r_s = 0.0
    kept = []
    for (lo, hi, val) in reversed(pot.pieces):
        shell = val * (4.0 * np.pi / 3.0) * (hi ** 3 - lo ** 3)
        if outer + shell < target or val == 0.0:
            outer += shell
            kept.append((lo, hi, val))
            continue
        # root inside this piece: 4pi/3 * val * (hi^3 - r^3) = target - outer
        r_cubed = hi ** 3 - (target - outer) * 3.0 / (4.0 * np.pi * val)
        r_s = r_cubed ** (1.0 / 3.0)
        kept.append((r_s, hi, val))
        break
    else:
        r_s = pot.pieces[0][0] if pot.pieces else 0.0
    kept.reverse()
    out = RadialPotential(core_radius=0.0, pieces=_merged(kept),
                          label=f"tailcut({pot.label or 'V'})")
    return out, r_s


# -- config-driven construction -----------------------------------------


def potential_from_config(section) -> RadialPotential:
    """Build a potential from a key-value mapping (config file section).

    kind = hardcore  -> R
    kind = squarewell -> K, R
    kind = piecewise -> shells = "lo hi value; lo hi value; ...", optional core
    kind = tabulated -> file (two-column text r, V), optional shells count
    """
    kind = str(section.get("kind", "")).strip().lower()
    if kind == "hardcore":
        return hard_core(float(section["R"]))
    if kind == "squarewell":
        return square_well(float(section["K"]), float(section["R"]))
    if kind == "piecewise":
        core = float(section.get("core", 0.0))
        pieces = []
        for chunk in str(section["shells"]).split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            lo, hi, val = (float(x) for x in chunk.replace(",", " ").split())
            pieces.append((lo, hi, val))
        return from_pieces(pieces, core_radius=core)
    if kind == "tabulated":
        data = np.loadtxt(str(section["file"]))
        shells = int(section.get("shells", 4096))
        return from_samples(data[:, 0], data[:, 1], shells=shells)
    raise ValueError(f"unknown potential kind {kind!r}; "
                     "expected hardcore, squarewell, piecewise or tabulated")
