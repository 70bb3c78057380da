import math
from dataclasses import replace

import numpy as np
import pytest

from lasergrav import (CONSTANTS, AnsatzConfig, InteractionParams,
                       config_at_ratio, critical_intensity_ratio,
                       energy_breakdown, energy_gradient_parts, mfa_validity,
                       minimize_width, pair_potential, peak_density,
                       threshold_intensity, total_energy, width_vs_intensity)
from lasergrav.variational import pair_interaction_integral, tf_energy_unit

LAM = 589e-9


def _gaussian_pairs(rng, w, n_samples):
    """Pair separations (units of lam) for two draws from the trial cloud."""
    # per-axis variance of each position is w^2/2, of the separation w^2
    delta = rng.normal(scale=w, size=(n_samples, 3))
    return np.linalg.norm(delta, axis=1)


def test_pair_density_integral_is_normalized():
    # the integrator reproduces <1/s> for the Maxwell separation law
    for w in (0.05, 0.3, 2.0):
        mean_inv = pair_interaction_integral(w, kernel="near_zone")
        assert mean_inv == pytest.approx(-2.0 / (math.sqrt(2 * math.pi) * w),
                                         rel=1e-9)


def test_near_zone_mean_by_monte_carlo():
    # 1e6-sample check of <1/s> against the closed form, 0.5% tolerance
    rng = np.random.default_rng(42)
    w = 0.3
    s = _gaussian_pairs(rng, w, 1_000_000)
    mc = float(np.mean(-1.0 / s))
    exact = -2.0 / (math.sqrt(2 * math.pi) * w)
    assert mc == pytest.approx(exact, rel=5e-3)


def test_gravitational_energy_matches_monte_carlo(na):
    # full kernel at (w=0.3, I=1.5 I0): quadrature within 3 sigma of sampling
    cfg = config_at_ratio(na, 1.5, LAM, n_atoms=1000.0, use_detuned=True,
                          tf_limit=True)
    w = 0.3
    breakdown = energy_breakdown(w, cfg)
    rng = np.random.default_rng(7)
    s = _gaussian_pairs(rng, w, 1_000_000)
    u_vals = pair_potential(s, cfg.interaction.coupling, LAM)
    mc_mean = 0.5 * cfg.n_atoms * float(np.mean(u_vals))
    mc_sem = 0.5 * cfg.n_atoms * float(np.std(u_vals, ddof=1)) / math.sqrt(len(s))
    assert abs(breakdown.gravitational - mc_mean) < 3.0 * mc_sem


def test_swave_and_trap_terms_by_monte_carlo(na):
    # contact term ~ mean density, trap term ~ mean square radius
    params = InteractionParams.from_intensity(na, 0.0, LAM, use_detuned=True)
    cfg = AnsatzConfig(n_atoms=500.0, species=na, interaction=params,
                       trap_frequency=2 * math.pi * 150.0)
    w = 0.8
    b = w * LAM
    breakdown = energy_breakdown(w, cfg)
    rng = np.random.default_rng(11)
    pos = rng.normal(scale=b / math.sqrt(2.0), size=(400_000, 3))
    r2 = np.sum(pos**2, axis=1)
    density_one = np.exp(-r2 / b**2) / (math.pi * b * b) ** 1.5
    swave_mc = 0.5 * na.contact_coupling * cfg.n_atoms * float(np.mean(density_one))
    trap_mc = 0.5 * na.mass * cfg.trap_frequency**2 * float(np.mean(r2))
    assert breakdown.swave == pytest.approx(swave_mc, rel=5e-3)
    assert breakdown.trap == pytest.approx(trap_mc, rel=5e-3)


def test_term_switch_off_leaves_pure_contact_scaling(na):
    params = InteractionParams.from_intensity(na, 0.0, LAM, use_detuned=True)
    cfg = AnsatzConfig(n_atoms=100.0, species=na, interaction=params,
                       tf_limit=True)
    for w in (0.2, 0.5, 1.0, 3.0):
        breakdown = energy_breakdown(w, cfg)
        assert breakdown.kinetic == 0.0
        assert breakdown.trap == 0.0
        assert breakdown.gravitational == 0.0
        assert breakdown.total == breakdown.swave
        assert breakdown.total * w**3 == pytest.approx(
            energy_breakdown(1.0, cfg).total, rel=1e-12)


def test_pure_gravity_minimizer_matches_calculus_oracle(na):
    # -u/r kernel, kinetic on, contact off: b* = 3 sqrt(2 pi) hbar^2/(2 m u N)
    n_atoms = 1000.0
    intensity = threshold_intensity(na, use_detuned=True)
    params = InteractionParams.from_intensity(na, intensity, LAM,
                                              use_detuned=True)
    cfg = AnsatzConfig(n_atoms=n_atoms, species=na, interaction=params,
                       kernel="near_zone", include_swave=False)
    result = minimize_width(cfg)
    b_star = 3.0 * math.sqrt(2 * math.pi) * CONSTANTS.hbar**2 / (
        2.0 * na.mass * params.coupling * n_atoms)
    assert result.bound_local and result.bound_global
    assert result.w_star == pytest.approx(b_star / LAM, rel=1e-5)
    e_oracle = 3 * CONSTANTS.hbar**2 / (4 * na.mass * b_star**2) \
        - params.coupling * n_atoms / (math.sqrt(2 * math.pi) * b_star)
    assert result.breakdown.total == pytest.approx(e_oracle, rel=1e-8)


def test_tf_width_at_reference_intensity(tf_width_15):
    assert tf_width_15.bound_local and tf_width_15.bound_global
    assert tf_width_15.r_rms / LAM == pytest.approx(0.43, rel=0.05)


def test_unbound_below_threshold(na):
    cfg = config_at_ratio(na, 0.5, LAM, use_detuned=True, tf_limit=True)
    result = minimize_width(cfg)
    assert not result.bound_local
    assert not result.bound_global
    assert math.isnan(result.w_star)
    assert result.breakdown is None


def test_width_decreases_with_intensity(na):
    cfg = config_at_ratio(na, 1.0, LAM, use_detuned=True, tf_limit=True)
    rows = width_vs_intensity(cfg, [1.1, 1.5, 3.0, 10.0])
    widths = [row["w_star"] for row in rows]
    assert all(row["bound"] for row in rows)
    assert all(w2 < w1 for w1, w2 in zip(widths, widths[1:]))


def test_width_sweep_tags_unbound_entries(na):
    cfg = config_at_ratio(na, 1.0, LAM, use_detuned=True, tf_limit=True)
    rows = width_vs_intensity(cfg, [0.9, 1.5])
    assert rows[0]["bound"] is False
    assert math.isnan(rows[0]["w_star"])
    assert rows[1]["bound"] is True


def test_critical_ratio_near_unity(na):
    ratio = critical_intensity_ratio(na, LAM, use_detuned=True)
    assert ratio == pytest.approx(1.0, rel=0.05)


def test_critical_ratio_independent_of_atom_number_and_wavelength(na):
    base = critical_intensity_ratio(na, LAM, n_atoms=1.0, use_detuned=True)
    other_n = critical_intensity_ratio(na, LAM, n_atoms=1e5, use_detuned=True)
    other_lam = critical_intensity_ratio(na, 1.064e-6, use_detuned=True)
    assert other_n == pytest.approx(base, rel=1e-3)
    assert other_lam == pytest.approx(base, rel=1e-3)


def test_minimizer_location_independent_of_species_in_tf_units(na, rb):
    # equal I/I0 gives the same reduced energy curve for any species
    cfg_na = config_at_ratio(na, 1.5, LAM, tf_limit=True)
    cfg_rb = config_at_ratio(rb, 1.5, 780e-9, tf_limit=True)
    w_na = minimize_width(cfg_na).w_star
    w_rb = minimize_width(cfg_rb).w_star
    assert w_rb == pytest.approx(w_na, rel=1e-3)
    for w in (0.2, 0.35, 0.8):
        e_na = total_energy(w, cfg_na) / tf_energy_unit(cfg_na)
        e_rb = total_energy(w, cfg_rb) / tf_energy_unit(cfg_rb)
        assert e_rb == pytest.approx(e_na, rel=1e-9)


def test_gradient_closed_forms_match_finite_difference(na):
    # coupling off isolates the closed-form terms
    params = InteractionParams.from_intensity(na, 0.0, LAM, use_detuned=True)
    cfg = AnsatzConfig(n_atoms=200.0, species=na, interaction=params,
                       trap_frequency=2 * math.pi * 80.0)
    w = 0.7
    closed, grav = energy_gradient_parts(w, cfg)
    assert grav == 0.0
    dw = 1e-6 * w
    fd = (total_energy(w + dw, cfg) - total_energy(w - dw, cfg)) / (2 * dw)
    assert closed == pytest.approx(fd, rel=1e-6)


def test_gradient_with_attraction_matches_finite_difference(na):
    cfg = config_at_ratio(na, 1.5, LAM, n_atoms=500.0, use_detuned=True)
    for w in (0.25, 0.4, 0.9):
        closed, grav = energy_gradient_parts(w, cfg)
        dw = 1e-5 * w
        fd = (total_energy(w + dw, cfg) - total_energy(w - dw, cfg)) / (2 * dw)
        assert closed + grav == pytest.approx(fd, rel=1e-4)


def test_mfa_validity_at_bound_solution(na, tf_width_15):
    cfg = config_at_ratio(na, 1.5, LAM, n_atoms=40.0, use_detuned=True,
                          tf_limit=True)
    rho = peak_density(40.0, tf_width_15.w_star, LAM)
    report = mfa_validity(rho, na, cfg.interaction.coupling)
    assert report["rho_a3"] < 1e-2
    assert report["rho_astar3"] > 1e2
    assert report["dilute_ok"] and report["long_range_ok"]


def test_invalid_inputs(na):
    cfg = config_at_ratio(na, 1.5, LAM, use_detuned=True)
    with pytest.raises(ValueError):
        energy_breakdown(0.0, cfg)
    with pytest.raises(ValueError):
        width_vs_intensity(cfg, [1.0, -2.0])
    with pytest.raises(ValueError):
        AnsatzConfig(n_atoms=0.5, species=na, interaction=cfg.interaction)
    with pytest.raises(ValueError):
        replace(cfg, kernel="yukawa")
    with pytest.raises(ValueError, match="non-positive scattering length"):
        threshold_intensity(replace(na, scattering_length=-1e-9))


def test_breakdown_total_is_sum_of_parts(na):
    cfg = config_at_ratio(na, 1.5, LAM, n_atoms=50.0, use_detuned=True,
                          trap_frequency=2 * math.pi * 50.0)
    b = energy_breakdown(0.4, cfg)
    assert b.total == b.kinetic + b.trap + b.swave + b.gravitational
    assert b.kinetic >= 0.0 and b.trap >= 0.0 and b.swave >= 0.0
