import math

import pytest

from lasergrav import (CONSTANTS, SpeciesFileError, catalog_lookup,
                       intensity_in, intensity_si, parse_species_file,
                       polarizability_si, polarizability_volume,
                       threshold_intensity)


def test_h_is_two_pi_hbar():
    assert CONSTANTS.h == 2.0 * math.pi * CONSTANTS.hbar


def test_polarizability_zero_maps_to_zero():
    assert polarizability_si(0.0) == 0.0


def test_polarizability_reference_value():
    # 3.534e-18 cm^3 -> about 3.93e-34 C m^2/V
    alpha = polarizability_si(3.534e-24)
    assert alpha == pytest.approx(3.93e-34, rel=1e-2)


@pytest.mark.parametrize("volume", [1e-30, 24.1e-30, 3.534e-24, 7.7e-10])
def test_polarizability_round_trip(volume):
    assert polarizability_volume(polarizability_si(volume)) == \
        pytest.approx(volume, rel=4e-16)


def test_intensity_conversions():
    assert intensity_si(262.0, "mW/cm^2") == pytest.approx(2620.0, rel=1e-15)
    assert intensity_si(5.65e9, "W/cm^2") == pytest.approx(5.65e13, rel=1e-15)
    assert intensity_si(0.0, "W/cm^2") == 0.0
    assert intensity_si(1.25, "W/m^2") == 1.25


def test_intensity_round_trip():
    value = 371.25
    for unit in ("W/m^2", "W/cm^2", "mW/cm^2"):
        assert intensity_in(intensity_si(value, unit), unit) == \
            pytest.approx(value, rel=4e-16)


def test_intensity_rejects_unknown_unit_and_negative():
    with pytest.raises(ValueError, match="unknown intensity unit"):
        intensity_si(1.0, "kW/cm^2")
    with pytest.raises(ValueError, match="non-negative"):
        intensity_si(-1.0, "W/m^2")


def test_catalog_unknown_species():
    with pytest.raises(ValueError, match="unknown species"):
        catalog_lookup("Cs")


def test_catalog_reproduces_reference_thresholds():
    # the catalog constants must keep the published threshold intensities
    na = catalog_lookup("Na")
    rb = catalog_lookup("Rb87")
    assert intensity_in(threshold_intensity(na), "W/cm^2") == \
        pytest.approx(5.65e9, rel=0.03)
    assert intensity_in(threshold_intensity(rb), "W/cm^2") == \
        pytest.approx(8.19e8, rel=0.03)
    assert intensity_in(threshold_intensity(na, use_detuned=True),
                        "mW/cm^2") == pytest.approx(262.0, rel=0.10)


def test_catalog_detuned_enhancement():
    na = catalog_lookup("Na")
    ratio = na.detuned.polarizability_volume / na.polarizability_volume
    assert ratio == pytest.approx(1.5e5, rel=0.05)


def test_contact_coupling_accessor():
    na = catalog_lookup("Na")
    expected = 4 * math.pi * na.scattering_length * CONSTANTS.hbar**2 / na.mass
    assert na.contact_coupling == pytest.approx(expected, rel=1e-15)


SPECIES_TEXT = """\
# toy species
name = X
mass_kg = 3.8175e-26
a_m = 2.75e-9
alpha_v_m3 = 24.1e-30

name = Y
mass_kg = 1.0e-25
a_m = 5.0e-9
alpha_v_m3 = 40e-30
detuned_transition_wavelength_m = 600e-9
detuned_delta_rad_s = 1e10
detuned_gamma_rad_s = 6e7
detuned_d_Cm = 2e-29
detuned_alpha_v_m3 = 3e-24
"""


def test_species_file_parses_records():
    table = parse_species_file(SPECIES_TEXT, source="toy")
    assert set(table) == {"X", "Y"}
    assert table["X"].scattering_length == 2.75e-9
    assert table["X"].detuned is None
    assert table["Y"].detuned.detuning == 1e10


def test_species_file_errors_name_the_line():
    with pytest.raises(SpeciesFileError, match="line 2"):
        parse_species_file("name = X\nmass_kg : 1e-26\n", source="bad")
    with pytest.raises(SpeciesFileError, match="line 2.*not a number"):
        parse_species_file("name = X\nmass_kg = heavy\n", source="bad")
    with pytest.raises(SpeciesFileError, match="unknown key"):
        parse_species_file("name = X\ncolour = blue\n", source="bad")
    with pytest.raises(SpeciesFileError, match="missing keys"):
        parse_species_file("name = X\nmass_kg = 1e-26\n", source="bad")
    with pytest.raises(SpeciesFileError, match="incomplete detuned"):
        parse_species_file(
            "name = X\nmass_kg = 1e-26\na_m = 1e-9\nalpha_v_m3 = 1e-29\n"
            "detuned_delta_rad_s = 1e10\n", source="bad")
