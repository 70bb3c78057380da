"""Gaussian-ansatz energy functional and width minimization.

The trial state is an isotropic Gaussian of dimensionless width ``w`` (in
units of the laser wavelength), density N |phi|^2 with per-axis variance
(w lam)^2 / 2.  Per particle the four energy contributions are

    kinetic       3 hbar^2 / (4 m (w lam)^2)        (dropped in the TF limit)
    trap          (3/4) m omega0^2 (w lam)^2
    s-wave        g N / (2 (2 pi)^(3/2) (w lam)^3)
    attraction    (N/2) Int P(s; w) U(s) ds

where P(s; w) is the pair-separation density of two independent draws from
the trial cloud: a Maxwell law with per-axis variance (w lam)^2.  The
attraction integral has an oscillatory integrand beyond r ~ 0.36 lam and is
integrated on half-period panels with an error-estimating Gauss rule; the
s -> 0 end is regular because P ~ s^2 cancels the -u/s of the kernel (the
series branch of the kernel keeps that product accurate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .constants import CONSTANTS
from .errors import NumericsError
from .interaction import InteractionParams, kernel_shape
from .species import AtomSpecies

# half-period of the kernel oscillation in units of the wavelength
_PANEL_WIDTH = 0.25
# Gaussian pair-separation weight drops below 1e-22 of its peak at 10 sigma
_RANGE_SIGMAS = 10.0
_GL_LO = leggauss(16)
_GL_HI = leggauss(32)
_QUAD_RTOL = 1e-9

GRID_W_MIN = 1e-2
GRID_W_MAX = 1e2
GRID_POINTS = 400
GOLDEN_TOL = 1e-6

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AnsatzConfig:
    """Inputs of the variational problem.

    ``kernel`` selects the full oscillatory pair potential or its -u/r
    near-zone limit (the latter mainly serves as an analytic oracle);
    ``include_swave`` switches the contact term for the same purpose.
    """

    n_atoms: float
    species: AtomSpecies
    interaction: InteractionParams
    trap_frequency: float = 0.0
    tf_limit: bool = False
    kernel: str = "full"
    include_swave: bool = True

    def __post_init__(self):
        if self.n_atoms < 1.0:
            raise ValueError(f"need at least one atom, got {self.n_atoms}")
        if self.trap_frequency < 0.0:
            raise ValueError("trap frequency must be non-negative")
        if self.kernel not in ("full", "near_zone"):
            raise ValueError(f"unknown kernel {self.kernel!r}")


@dataclass(frozen=True)
class EnergyBreakdown:
    """Per-particle energies (J) of the four contributions and their sum."""

    kinetic: float
    trap: float
    swave: float
    gravitational: float
    total: float

    @classmethod
    def from_parts(cls, kinetic, trap, swave, gravitational):
        return cls(kinetic, trap, swave, gravitational,
                   kinetic + trap + swave + gravitational)


@dataclass(frozen=True)
class VariationalResult:
    """Equilibrium width and self-binding verdict.

    ``bound_local``: a finite-w local minimum exists.  ``bound_global``: its
    energy lies below the w -> infinity dissociation value (zero without a
    trap).  When unbound, ``w_star`` and ``r_rms`` are NaN and ``breakdown``
    is None.
    """

    w_star: float
    r_rms: float
    breakdown: Optional[EnergyBreakdown]
    bound_local: bool
    bound_global: bool


def _pair_density(s: np.ndarray, w: float) -> np.ndarray:
    return (4.0 * math.pi * s * s * np.exp(-s * s / (2.0 * w * w))
            / (2.0 * math.pi * w * w) ** 1.5)


def _kernel_values(s: np.ndarray, kernel: str) -> np.ndarray:
    if kernel == "near_zone":
        return -1.0 / s
    return kernel_shape(s)


def pair_interaction_integral(w: float, kernel: str = "full",
                              d_dw: bool = False) -> float:
    """Mean dimensionless pair energy <U lam / u> over P(s; w).

    With ``d_dw`` the integrand is differentiated under the integral sign
    (dP/dw = P (s^2/w^3 - 3/w)), giving the width derivative of the mean.
    Panels are refined once where the embedded 16/32-point Gauss pair
    disagrees; persistent disagreement raises :class:`NumericsError`.
    """
    if w <= 0.0:
        raise ValueError(f"width must be positive, got {w}")
    s_max = _RANGE_SIGMAS * w
    edges = np.arange(0.0, s_max, _PANEL_WIDTH)
    edges = np.append(edges, s_max)

    def integrand(s):
        p = _pair_density(s, w)
        if d_dw:
            p = p * (s * s / w**3 - 3.0 / w)
        return p * _kernel_values(s, kernel)

    def panel_pair(a, b):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        lo = np.sum(half[:, None] * _GL_LO[1] * integrand(
            (mid[:, None] + half[:, None] * _GL_LO[0]).ravel()).reshape(len(a), -1), axis=1)
        hi = np.sum(half[:, None] * _GL_HI[1] * integrand(
            (mid[:, None] + half[:, None] * _GL_HI[0]).ravel()).reshape(len(a), -1), axis=1)
        return lo, hi

    a, b = edges[:-1], edges[1:]
    lo, hi = panel_pair(a, b)
    err = np.abs(hi - lo)
    scale = max(np.sum(np.abs(hi)), abs(np.sum(hi)), 1e-300)
    bad = err > _QUAD_RTOL * scale / max(len(a), 1)
    if np.any(bad):
        # one refinement round: split offending panels in half
        a2 = np.concatenate([a[bad], 0.5 * (a[bad] + b[bad])])
        b2 = np.concatenate([0.5 * (a[bad] + b[bad]), b[bad]])
        lo2, hi2 = panel_pair(a2, b2)
        if np.sum(np.abs(hi2 - lo2)) > 10.0 * _QUAD_RTOL * scale:
            raise NumericsError(
                f"pair-energy quadrature did not converge at w={w:g} "
                f"(residual {np.sum(np.abs(hi2 - lo2)):.3e})")
        total = float(np.sum(hi[~bad]) + np.sum(hi2))
    else:
        total = float(np.sum(hi))
    if not math.isfinite(total):
        raise NumericsError(f"pair-energy quadrature returned {total} at w={w:g}")
    return total


def energy_breakdown(w: float, cfg: AnsatzConfig) -> EnergyBreakdown:
    """Per-particle energy terms of the Gaussian trial state at width ``w``."""
    if w <= 0.0:
        raise ValueError(f"width must be positive, got {w}")
    lam = cfg.interaction.wavelength
    b = w * lam
    m = cfg.species.mass
    hbar = CONSTANTS.hbar
    kinetic = 0.0 if cfg.tf_limit else 3.0 * hbar**2 / (4.0 * m * b * b)
    trap = 0.75 * m * cfg.trap_frequency**2 * b * b
    swave = 0.0
    if cfg.include_swave:
        swave = (cfg.species.contact_coupling * cfg.n_atoms
                 / (2.0 * (2.0 * math.pi) ** 1.5 * b**3))
    grav = 0.0
    if cfg.interaction.coupling != 0.0:
        grav = (0.5 * cfg.n_atoms * cfg.interaction.coupling / lam
                * pair_interaction_integral(w, cfg.kernel))
    return EnergyBreakdown.from_parts(kinetic, trap, swave, grav)


def energy_gradient_parts(w: float, cfg: AnsatzConfig) -> tuple[float, float]:
    """(closed-form dE/dw of kinetic+trap+swave, quadrature dE/dw of the
    attraction term), both per particle in J per unit w."""
    lam = cfg.interaction.wavelength
    b = w * lam
    m = cfg.species.mass
    hbar = CONSTANTS.hbar
    closed = 0.0
    if not cfg.tf_limit:
        closed += -2.0 * 3.0 * hbar**2 / (4.0 * m * b * b * w)
    closed += 2.0 * 0.75 * m * cfg.trap_frequency**2 * b * b / w
    if cfg.include_swave:
        closed += (-3.0 * cfg.species.contact_coupling * cfg.n_atoms
                   / (2.0 * (2.0 * math.pi) ** 1.5 * b**3 * w))
    grav = (0.5 * cfg.n_atoms * cfg.interaction.coupling / lam
            * pair_interaction_integral(w, cfg.kernel, d_dw=True))
    return closed, grav


def total_energy(w: float, cfg: AnsatzConfig) -> float:
    return energy_breakdown(w, cfg).total


def tf_energy_unit(cfg: AnsatzConfig) -> float:
    """Natural per-particle energy scale N u / lam of the TF problem (J)."""
    return cfg.n_atoms * cfg.interaction.coupling / cfg.interaction.wavelength


def _golden_minimize(fun, lo: float, hi: float, tol: float) -> float:
    """Golden-section minimum of ``fun`` over [lo, hi] in log space."""
    lo, hi = math.log(lo), math.log(hi)
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = fun(math.exp(c)), fun(math.exp(d))
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = fun(math.exp(c))
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = fun(math.exp(d))
    return math.exp(0.5 * (lo + hi))


def minimize_width(cfg: AnsatzConfig,
                   w_min: float = GRID_W_MIN,
                   w_max: float = GRID_W_MAX,
                   n_grid: int = GRID_POINTS) -> VariationalResult:
    """Locate the lowest finite-width local energy minimum.

    Scans a log-spaced width grid for the sign structure of the discrete
    energy differences, refines every interior candidate by golden section to
    relative width 1e-6 and returns the deepest one.  If no interior minimum
    exists, the unbound verdict is returned with NaN width.
    """
    grid = np.logspace(math.log10(w_min), math.log10(w_max), n_grid)
    energies = np.array([total_energy(w, cfg) for w in grid])
    candidates = [
        i for i in range(1, n_grid - 1)
        if energies[i] <= energies[i - 1] and energies[i] < energies[i + 1]
    ]
    if not candidates:
        return VariationalResult(math.nan, math.nan, None, False, False)
    best_w, best_e = None, math.inf
    for i in candidates:
        w_ref = _golden_minimize(lambda w: total_energy(w, cfg),
                                 grid[i - 1], grid[i + 1], GOLDEN_TOL)
        e_ref = total_energy(w_ref, cfg)
        if e_ref < best_e:
            best_w, best_e = w_ref, e_ref
    breakdown = energy_breakdown(best_w, cfg)
    r_rms = math.sqrt(1.5) * best_w * cfg.interaction.wavelength
    return VariationalResult(best_w, r_rms, breakdown,
                             bound_local=True,
                             bound_global=breakdown.total < 0.0)


def threshold_intensity(species: AtomSpecies, use_detuned: bool = False) -> float:
    """Total intensity (W/m^2) above which the TF cloud self-binds:
    (48 pi / 7) hbar^2 c eps0^2 a / (m alpha^2)."""
    a = species.scattering_length
    if a <= 0.0:
        raise ValueError(
            f"threshold undefined for non-positive scattering length a={a}")
    alpha = species.alpha_si(use_detuned)
    return (48.0 * math.pi / 7.0) * CONSTANTS.hbar**2 * CONSTANTS.c \
        * CONSTANTS.eps0**2 * a / (species.mass * alpha**2)


def config_at_ratio(species: AtomSpecies, ratio: float, wavelength: float,
                    n_atoms: float = 1.0, use_detuned: bool = False,
                    trap_frequency: float = 0.0, tf_limit: bool = False,
                    kernel: str = "full") -> AnsatzConfig:
    """AnsatzConfig with total intensity ``ratio`` times the species threshold."""
    intensity = ratio * threshold_intensity(species, use_detuned)
    params = InteractionParams.from_intensity(species, intensity, wavelength,
                                              use_detuned)
    return AnsatzConfig(n_atoms=n_atoms, species=species, interaction=params,
                        trap_frequency=trap_frequency, tf_limit=tf_limit,
                        kernel=kernel)


def width_vs_intensity(cfg: AnsatzConfig, ratios: Sequence[float]) -> list[dict]:
    """Equilibrium width for each intensity ratio I/I0.

    The intensity of ``cfg`` is rescaled per entry (same polarizability
    route); unbound entries are tagged with ``bound=False`` and NaN width.
    """
    if any(r <= 0.0 for r in ratios):
        raise ValueError("intensity ratios must be positive")
    alpha = cfg.interaction.alpha_si
    i0 = (48.0 * math.pi / 7.0) * CONSTANTS.hbar**2 * CONSTANTS.c \
        * CONSTANTS.eps0**2 * cfg.species.scattering_length \
        / (cfg.species.mass * alpha**2)
    lam = cfg.interaction.wavelength
    rows = []
    for ratio in ratios:
        intensity = ratio * i0
        coupling = (11.0 * math.pi / 15.0) * intensity * alpha**2 / (
            CONSTANTS.c * CONSTANTS.eps0**2 * lam**2)
        params = InteractionParams(intensity=intensity, wavelength=lam,
                                   coupling=coupling, alpha_si=alpha)
        result = minimize_width(replace(cfg, interaction=params))
        rows.append({
            "ratio": ratio,
            "w_star": result.w_star,
            "r_rms": result.r_rms,
            "bound": result.bound_local,
        })
    return rows


def critical_intensity_ratio(species: AtomSpecies, wavelength: float,
                             n_atoms: float = 1.0, use_detuned: bool = False,
                             rel_tol: float = 1e-3,
                             bracket: tuple[float, float] = (0.5, 2.0)) -> float:
    """Bisect I/I0 between the unbound and bound verdicts in the TF limit."""
    def bound_at(ratio):
        cfg = config_at_ratio(species, ratio, wavelength, n_atoms,
                              use_detuned, tf_limit=True)
        return minimize_width(cfg).bound_local

    lo, hi = bracket
    if bound_at(lo) or not bound_at(hi):
        raise NumericsError(
            f"bracketing failure: expected unbound at I/I0={lo} and bound at {hi}")
    while (hi - lo) > rel_tol * lo:
        mid = 0.5 * (lo + hi)
        if bound_at(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def mfa_validity(rho_peak: float, species: AtomSpecies,
                 coupling: float) -> dict:
    """Both mean-field validity numbers at peak density.

    ``rho_a3`` (= rho a^3) must be small for the contact interaction,
    ``rho_astar3`` (= rho (h^2/(m u))^3) must be large for the long-range
    attraction.  The flags use documented cutoffs 1e-2 and 1e2.
    """
    a3 = species.scattering_length**3
    astar = CONSTANTS.h**2 / (species.mass * coupling)
    rho_a3 = rho_peak * a3
    rho_astar3 = rho_peak * astar**3
    return {
        "rho_a3": rho_a3,
        "rho_astar3": rho_astar3,
        "dilute_ok": rho_a3 < 1e-2,
        "long_range_ok": rho_astar3 > 1e2,
    }


def peak_density(n_atoms: float, w: float, wavelength: float) -> float:
    """Central density N / (pi^(3/2) (w lam)^3) of the Gaussian cloud (m^-3)."""
    return n_atoms / (math.pi ** 1.5 * (w * wavelength) ** 3)
