"""Radial imaginary-time ground-state solver for the nonlocal mean-field
equation; independent cross-check of the variational widths.

For an isotropic kernel and an isotropic density the mean-field potential
reduces to a one-dimensional integral

    Phi(R) = (2 pi / R) Int_0^inf s rho(s) [ J(R+s) - J(|R-s|) ] ds,

with J(t) = Int_0^t t' U(t') dt' finite at zero because t U(t) -> -u.  J is
tabulated once per solve from a cubic-spline antiderivative of t U(t) (40
samples per half-oscillation).  The integrand has a derivative kink at s = R,
so the quadrature uses composite Simpson weights split at that node; the
whole convolution is then a precomputed dense matrix applied per iteration,
O(n^2) with small constants.

The solver relaxes v = R * Psi (which makes the radial Laplacian
tridiagonal) in imaginary time, semi-implicit on the kinetic term, explicit
on the local and mean-field potentials, renormalizing to N every step, with
Dirichlet boundaries v(0) = v(R_max) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import cho_solve_banded, cholesky_banded

from .constants import CONSTANTS
from .errors import CollapseError, ConvergenceError, NumericsError
from .interaction import kernel_shape
from .variational import AnsatzConfig, minimize_width

# kernel sampling for the J table: 40 points per half-oscillation (lam/4)
_J_SAMPLES_PER_HALF_OSC = 40
# full kernel needs >= 20 grid points per lam/2 oscillation
_MIN_POINTS_PER_HALF_WAVE = 20

MU_RTOL = 1e-9
MAX_ITERATIONS = 400_000
_ENERGY_SLACK = 1e-12


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid with nodes R_i = i h, i = 1..n."""

    n_points: int
    r_max: float

    def __post_init__(self):
        if self.n_points < 256:
            raise ValueError(f"need at least 256 points, got {self.n_points}")
        if self.r_max <= 0.0:
            raise ValueError("r_max must be positive")

    @property
    def spacing(self) -> float:
        return self.r_max / self.n_points

    @property
    def nodes(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.n_points + 1)


@dataclass(frozen=True)
class GroundState:
    """Converged order parameter and its diagnostics (all SI)."""

    grid: RadialGrid
    psi: np.ndarray          # m^(-3/2), nodeless and non-negative
    density: np.ndarray      # m^-3
    mu: float                # J
    r_rms: float             # m
    iterations: int
    residual: float          # last relative change of mu
    n_atoms: float
    energies: dict = field(repr=False)  # per-term totals, J


def _simpson_weights(m: int, h: float) -> np.ndarray:
    """Composite Simpson weights over m uniform intervals (3/8 tail if odd)."""
    w = np.zeros(m + 1)
    if m == 0:
        return w
    if m == 1:
        w[:] = 0.5 * h
        return w
    if m % 2 == 0:
        w[0] = w[-1] = h / 3.0
        w[1:-1:2] = 4.0 * h / 3.0
        w[2:-1:2] = 2.0 * h / 3.0
        return w
    k = m - 3
    if k > 0:
        w[0] = h / 3.0
        w[1:k:2] = 4.0 * h / 3.0
        w[2:k:2] = 2.0 * h / 3.0
        w[k] = h / 3.0
    w[k] += 3.0 * h / 8.0
    w[k + 1] += 9.0 * h / 8.0
    w[k + 2] += 9.0 * h / 8.0
    w[k + 3] += 3.0 * h / 8.0
    return w


def _kink_split_weights(n: int, h: float) -> np.ndarray:
    """Row i: s-quadrature weights over nodes 0..n, split at the kink s = R_i."""
    w = np.zeros((n, n + 1))
    for i in range(1, n + 1):
        w[i - 1, : i + 1] += _simpson_weights(i, h)
        w[i - 1, i:] += _simpson_weights(n - i, h)
    return w


def _canonical_kernel(kernel: str) -> str:
    if kernel in ("full", "full_uiso"):
        return "full"
    if kernel in ("near_zone", "newton"):
        return "near_zone"
    raise ValueError(f"unknown kernel {kernel!r}")


def _j_table(n: int, h_dimless: float, kernel: str) -> np.ndarray:
    """J(t)/ (u lam) on t_k = k h, k = 0..2n, t in wavelength units."""
    t_max = 2 * n * h_dimless
    if kernel == "near_zone":
        return -h_dimless * np.arange(0, 2 * n + 1)
    step = 0.25 / _J_SAMPLES_PER_HALF_OSC
    t_fine = np.arange(0.0, t_max + step, step)
    w = np.empty_like(t_fine)
    w[0] = -1.0  # t U(t) -> -u
    w[1:] = t_fine[1:] * kernel_shape(t_fine[1:])
    spline = CubicSpline(t_fine, w).antiderivative()
    return spline(h_dimless * np.arange(0, 2 * n + 1))


class _HartreeOperator:
    """Dense convolution matrix for one (grid, wavelength, kernel) triple.

    Maps density samples on the grid nodes to the mean-field potential in
    units of u/lam; linear in the density by construction.
    """

    def __init__(self, grid: RadialGrid, wavelength: float, kernel: str):
        kernel = _canonical_kernel(kernel)
        n = grid.n_points
        h = grid.spacing / wavelength
        if kernel == "full" and h > 0.5 / _MIN_POINTS_PER_HALF_WAVE:
            raise ValueError(
                f"grid too coarse for the oscillatory kernel: spacing "
                f"{grid.spacing:.3e} m resolves fewer than "
                f"{_MIN_POINTS_PER_HALF_WAVE} points per half-oscillation")
        self.grid = grid
        self.wavelength = wavelength
        self.kernel = kernel
        self._x = grid.nodes / wavelength
        j_tab = _j_table(n, h, kernel)
        i = np.arange(1, n + 1)
        j = np.arange(1, n + 1)
        diffs = j_tab[i[:, None] + j[None, :]] - j_tab[np.abs(i[:, None] - j[None, :])]
        # the s = 0 node of the split-Simpson rule multiplies an integrand
        # that vanishes there, so only columns j >= 1 are kept
        self._matrix = diffs * _kink_split_weights(n, h)[:, 1:]

    def __call__(self, rho_dimless: np.ndarray) -> np.ndarray:
        """Potential in units of u/lam for density samples in units lam^-3."""
        return (2.0 * math.pi / self._x) * (self._matrix @ (self._x * rho_dimless))


def hartree_potential(rho: np.ndarray, grid: RadialGrid, coupling: float,
                      wavelength: float, kernel: str = "full") -> np.ndarray:
    """Mean-field potential (J) of an isotropic density (m^-3) on the grid."""
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (grid.n_points,):
        raise ValueError(
            f"density must have one sample per node, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density samples must be finite")
    op = _HartreeOperator(grid, wavelength, kernel)
    return (coupling / wavelength) * op(rho * wavelength**3)


def solve_ground(cfg: AnsatzConfig, grid: RadialGrid,
                 w_init: Optional[float] = None,
                 mu_rtol: float = MU_RTOL,
                 max_iterations: int = MAX_ITERATIONS,
                 on_step=None) -> GroundState:
    """Relax to the mean-field ground state on ``grid``.

    The starting profile is a Gaussian of width ``w_init`` (in wavelength
    units); when omitted the variational equilibrium width is used if one
    exists, else 1.  Raises :class:`ConvergenceError` after
    ``max_iterations`` and :class:`CollapseError` when the cloud shrinks
    below four grid spacings.  The kinetic term is always retained
    (``cfg.tf_limit`` only affects the variational treatment).
    ``on_step(iteration, energy_J, mu_J)`` is invoked after every accepted
    step.
    """
    lam = cfg.interaction.wavelength
    m = cfg.species.mass
    hbar = CONSTANTS.hbar
    n = grid.n_points
    h = grid.spacing / lam            # dimensionless spacing
    x = grid.nodes / lam
    energy_unit = hbar**2 / (m * lam**2)

    # dimensionless couplings: contact 4 pi N a / lam, attraction u N m lam / hbar^2
    g_sw = 0.0
    if cfg.include_swave:
        g_sw = 4.0 * math.pi * cfg.n_atoms * cfg.species.scattering_length / lam
    gamma = cfg.interaction.coupling * cfg.n_atoms * m * lam / hbar**2
    omega_t = m * cfg.trap_frequency * lam**2 / hbar
    v_trap = 0.5 * omega_t**2 * x**2

    # no coupling means no kernel resolution constraint on the grid
    hartree = _HartreeOperator(grid, lam, cfg.kernel) if gamma != 0.0 else None

    if w_init is None:
        trial = minimize_width(cfg)
        w_init = trial.w_star if trial.bound_local else 1.0

    v = x * np.exp(-x**2 / (2.0 * w_init**2))
    v /= math.sqrt(4.0 * math.pi * h * float(v @ v))

    # v = x Psi: kinetic operator is -(1/2) d^2/dx^2, Dirichlet at both ends
    diag = np.full(n, 1.0 / h**2)
    off = np.full(n - 1, -0.5 / h**2)
    dtau0 = 0.1 * h * h
    dtau = dtau0

    banded = np.zeros((2, n))

    def factor(dt):
        banded[0, 1:] = dt * off
        banded[1, :] = 1.0 + dt * diag
        return cholesky_banded(banded)

    chol = factor(dtau)

    def apply_kinetic(vec):
        out = 2.0 * vec.copy()
        out[:-1] -= vec[1:]
        out[1:] -= vec[:-1]
        return out * (0.5 / h**2)

    def functionals(vec):
        chi2 = (vec / x) ** 2
        phi = gamma * hartree(chi2) if gamma != 0.0 else np.zeros(n)
        e_kin = 4.0 * math.pi * h * float(vec @ apply_kinetic(vec))
        e_trap = 4.0 * math.pi * h * float((v_trap * vec) @ vec)
        e_sw = 4.0 * math.pi * h * 0.5 * g_sw * float((chi2 * vec) @ vec)
        e_grav = 4.0 * math.pi * h * 0.5 * float((phi * vec) @ vec)
        return phi, e_kin, e_trap, e_sw, e_grav

    phi, e_kin, e_trap, e_sw, e_grav = functionals(v)
    energy_prev = e_kin + e_trap + e_sw + e_grav
    mu = e_kin + e_trap + 2.0 * e_sw + 2.0 * e_grav
    mu_prev = math.inf
    residual = math.inf
    iterations = 0
    r_rms_dimless = math.sqrt(4.0 * math.pi * h * float((x**2 * v) @ v))

    while iterations < max_iterations:
        iterations += 1
        chi2 = (v / x) ** 2
        local = v_trap + g_sw * chi2 + phi
        v_new = cho_solve_banded((chol, False), v - dtau * local * v)
        norm = 4.0 * math.pi * h * float(v_new @ v_new)
        if not math.isfinite(norm) or norm <= 0.0:
            raise NumericsError("relaxation produced a non-normalizable state")
        v_new /= math.sqrt(norm)

        phi_new, e_kin, e_trap, e_sw, e_grav = functionals(v_new)
        energy = e_kin + e_trap + e_sw + e_grav
        if energy > energy_prev + _ENERGY_SLACK * abs(energy_prev):
            # reject the step; phi still belongs to the accepted state
            dtau *= 0.5
            if dtau < 1e-8 * dtau0:
                raise ConvergenceError(
                    f"time step collapsed below {1e-8 * dtau0:g} without "
                    f"monotone energy descent")
            chol = factor(dtau)
            continue

        v, phi = v_new, phi_new
        energy_prev = energy
        mu = e_kin + e_trap + 2.0 * e_sw + 2.0 * e_grav
        if on_step is not None:
            on_step(iterations, cfg.n_atoms * energy * energy_unit,
                    mu * energy_unit)

        r_rms_dimless = math.sqrt(4.0 * math.pi * h * float((x**2 * v) @ v))
        if r_rms_dimless < 4.0 * h:
            raise CollapseError(
                f"cloud radius {r_rms_dimless * lam:.3e} m fell below four "
                f"grid spacings after {iterations} iterations")

        residual = abs(mu - mu_prev) / max(abs(mu), 1e-300)
        if residual < mu_rtol:
            break
        mu_prev = mu
    else:
        raise ConvergenceError(
            f"no convergence after {max_iterations} iterations "
            f"(mu residual {residual:.3e}, target {mu_rtol:g})")

    chi = v / x
    psi = math.sqrt(cfg.n_atoms) / lam**1.5 * chi
    energies = {
        "kinetic": cfg.n_atoms * e_kin * energy_unit,
        "trap": cfg.n_atoms * e_trap * energy_unit,
        "swave": cfg.n_atoms * e_sw * energy_unit,
        "gravitational": cfg.n_atoms * e_grav * energy_unit,
        "total": cfg.n_atoms * (e_kin + e_trap + e_sw + e_grav) * energy_unit,
    }
    return GroundState(
        grid=grid,
        psi=psi,
        density=psi**2,
        mu=mu * energy_unit,
        r_rms=r_rms_dimless * lam,
        iterations=iterations,
        residual=residual,
        n_atoms=cfg.n_atoms,
        energies=energies,
    )


def virial_report(state: GroundState) -> dict:
    """Per-term energies and the chemical-potential decomposition.

    The pairwise terms enter mu with double weight:
    mu N = E_kin + E_trap + 2 E_sw + 2 E_grav; the residual of that identity
    is checked and reported.
    """
    e = state.energies
    mu_n = e["kinetic"] + e["trap"] + 2.0 * e["swave"] + 2.0 * e["gravitational"]
    residual = abs(mu_n - state.mu * state.n_atoms) / max(abs(mu_n), 1e-300)
    if residual > 1e-8:
        raise NumericsError(
            f"chemical-potential identity violated: residual {residual:.3e}")
    return {
        "kinetic": e["kinetic"],
        "trap": e["trap"],
        "swave": e["swave"],
        "gravitational": e["gravitational"],
        "total": e["total"],
        "mu": state.mu,
        "mu_identity_residual": residual,
    }
