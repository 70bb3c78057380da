"""Rotationally averaged laser-induced pair potential and its coupling.

The potential between two atoms a distance ``r`` apart, driven by isotropic
triads of beams of total intensity ``I`` and wavelength ``lam``, is

    U(r) = -(15 pi u / 11 lam) * f(x),   x = 2 pi r / lam,

    f(x) = sin(2x)/x^2 + 2 cos(2x)/x^3 - 5 sin(2x)/x^4
           - 6 cos(2x)/x^5 + 3 sin(2x)/x^6,

with coupling ``u = (11 pi / 15) I alpha^2 / (c eps0^2 lam^2)``.  The five
terms of ``f`` individually blow up as x -> 0 while their sum behaves as
(22/15)/x, so U(r) -> -u/r in the near zone; direct evaluation there loses
roughly x^-4 relative digits to cancellation.  Below ``X_SWITCH`` we therefore
evaluate a precomputed power series instead of the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CONSTANTS
from .species import AtomSpecies

# x = 2*pi*r/lam below which the series branch is used
X_SWITCH = 0.05
SERIES_TERMS = 12


def _series_coefficients(n_terms: int) -> tuple[float, ...]:
    # sin/cos Taylor coefficients of f collected per power of x; the x^-5 and
    # x^-3 orders cancel identically, leaving odd powers from x^-1 upward
    def a(j):  # sin(2x) = sum a_j x^(2j+1)
        return (-1) ** j * 2.0 ** (2 * j + 1) / math.factorial(2 * j + 1)

    def b(j):  # cos(2x) = sum b_j x^(2j)
        return (-1) ** j * 2.0 ** (2 * j) / math.factorial(2 * j)

    return tuple(
        a(n) + 2 * b(n + 1) - 5 * a(n + 1) - 6 * b(n + 2) + 3 * a(n + 2)
        for n in range(n_terms)
    )


# leading coefficient is 22/15; the full prefactor then reduces to -u/r
_F_COEFFS = _series_coefficients(SERIES_TERMS)


def _f_direct(x: np.ndarray) -> np.ndarray:
    s, c = np.sin(2.0 * x), np.cos(2.0 * x)
    x2 = x * x
    x3 = x2 * x
    return (s / x2 + 2.0 * c / x3 - 5.0 * s / (x2 * x2)
            - 6.0 * c / (x2 * x3) + 3.0 * s / (x3 * x3))


def _f_series(x: np.ndarray) -> np.ndarray:
    x2 = x * x
    # Horner in x^2 on the coefficients of x^1, x^3, ... then add the 1/x term
    acc = np.full_like(x, _F_COEFFS[-1])
    for coeff in _F_COEFFS[-2:0:-1]:
        acc = acc * x2 + coeff
    return _F_COEFFS[0] / x + acc * x


def _fprime_direct(x: np.ndarray) -> np.ndarray:
    s, c = np.sin(2.0 * x), np.cos(2.0 * x)
    x2 = x * x
    x3 = x2 * x
    return (2.0 * c / x2 - 6.0 * s / x3 - 16.0 * c / (x2 * x2)
            + 32.0 * s / (x2 * x3) + 36.0 * c / (x3 * x3)
            - 18.0 * s / (x3 * x3 * x))


def _fprime_series(x: np.ndarray) -> np.ndarray:
    x2 = x * x
    acc = np.full_like(x, (2 * SERIES_TERMS - 3) * _F_COEFFS[-1])
    for n in range(SERIES_TERMS - 2, 0, -1):
        acc = acc * x2 + (2 * n - 1) * _F_COEFFS[n]
    return -_F_COEFFS[0] / x2 + acc


def kernel_shape(r_tilde) -> np.ndarray | float:
    """Pair potential in units of u/lam as a function of r/lam.

    Uses the series branch below ``X_SWITCH`` (in x = 2 pi r/lam) and the
    closed form above it; tends to -1/r_tilde as r_tilde -> 0.
    """
    r = np.asarray(r_tilde, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("separation must be positive")
    x = np.atleast_1d(2.0 * math.pi * r)
    out = np.empty_like(x)
    lo = x < X_SWITCH
    out[lo] = _f_series(x[lo])
    out[~lo] = _f_direct(x[~lo])
    out *= -(15.0 * math.pi / 11.0)
    return float(out[0]) if r.ndim == 0 else out.reshape(r.shape)


def kernel_slope(r_tilde) -> np.ndarray | float:
    """d/d(r/lam) of :func:`kernel_shape`; positive slope means the pair
    force is still attractive."""
    r = np.asarray(r_tilde, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("separation must be positive")
    x = np.atleast_1d(2.0 * math.pi * r)
    out = np.empty_like(x)
    lo = x < X_SWITCH
    out[lo] = _fprime_series(x[lo])
    out[~lo] = _fprime_direct(x[~lo])
    out *= -(15.0 * math.pi / 11.0) * 2.0 * math.pi
    return float(out[0]) if r.ndim == 0 else out.reshape(r.shape)


@dataclass(frozen=True)
class InteractionParams:
    """Total beam intensity, wavelength and the derived coupling.

    ``coupling`` (J m) is fixed by construction to the value implied by
    ``intensity`` and ``alpha_si``; ``wavevector`` is 2 pi / wavelength.
    """

    intensity: float
    wavelength: float
    coupling: float
    alpha_si: float

    @property
    def wavevector(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @classmethod
    def from_intensity(cls, species: AtomSpecies, intensity: float,
                       wavelength: float, use_detuned: bool = False) -> "InteractionParams":
        alpha = species.alpha_si(use_detuned)
        return cls(intensity=intensity, wavelength=wavelength,
                   coupling=coupling_strength(intensity, species, wavelength, use_detuned),
                   alpha_si=alpha)


def coupling_strength(intensity: float, species: AtomSpecies,
                      wavelength: float, use_detuned: bool = False) -> float:
    """Coupling u = (11 pi/15) I alpha^2 / (c eps0^2 lam^2) in J m.

    Linear in the total intensity; ``use_detuned`` selects the near-resonant
    polarizability from the species' detuned context.
    """
    if intensity < 0.0:
        raise ValueError(f"intensity must be non-negative, got {intensity}")
    if wavelength <= 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    alpha = species.alpha_si(use_detuned)
    return (11.0 * math.pi / 15.0) * intensity * alpha**2 / (
        CONSTANTS.c * CONSTANTS.eps0**2 * wavelength**2)


def pair_potential(r_tilde, coupling: float, wavelength: float):
    """U(r) in joules at separation r = r_tilde * wavelength."""
    return kernel_shape(r_tilde) * (coupling / wavelength)


def near_zone_limit(r, coupling: float):
    """The -u/r reference kernel (J); oracle for the near-zone behaviour."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("separation must be positive")
    out = -coupling / r
    return out if out.ndim else float(out)


def oscillation_onset(coupling: float = 1.0, wavelength: float = 1.0,
                      tol: float = 1e-6) -> float:
    """Smallest r/lam where the pair interaction turns repulsive.

    Inside this radius the force is everywhere attractive (the potential
    climbs monotonically out of its -u/r well, through its first zero);
    beyond it the force alternates sign with the potential oscillation.  The
    location is the first stationary point of the potential, found by
    bracketing the slope's sign change and bisecting to ``tol``.  The sign
    structure does not depend on the coupling, which only scales the
    potential, so the result is a pure number near 0.35.
    """
    if coupling <= 0.0:
        raise ValueError("coupling must be positive")
    lo = 0.05
    step = 1e-3
    hi = lo + step
    while kernel_slope(hi) > 0.0:
        lo, hi = hi, hi + step
        if hi > 1.0:
            raise RuntimeError("no repulsive turning point below r/lam = 1")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if kernel_slope(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def beam_budget(intensity_total: float, geometry: str) -> list[float]:
    """Per-beam intensities for the standard beam arrangements.

    ``triad``: three beams at I/3.  ``six_triads``: 12 beams at I/15 plus 6
    at I/30.  The returned list sums to the total exactly.
    """
    if intensity_total < 0.0:
        raise ValueError(f"intensity must be non-negative, got {intensity_total}")
    if geometry == "triad":
        beams = [intensity_total / 3.0] * 3
    elif geometry == "six_triads":
        beams = [intensity_total / 15.0] * 12 + [intensity_total / 30.0] * 6
    else:
        raise ValueError(f"unknown geometry {geometry!r}; expected 'triad' or 'six_triads'")
    # absorb the last rounding ulp so the list sums back to the total exactly
    beams[-1] = intensity_total - math.fsum(beams[:-1])
    return beams
