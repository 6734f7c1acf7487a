"""Flight energy-fluctuation statistics."""
import math
import random

import pytest

from casvolt import (
    CONSTANTS,
    ConvergenceError,
    DomainError,
    Particle,
    PathSegment,
    SummationControl,
    csc_identity,
    rms_one_plate_smallv,
    length_to_natural,
    validity_window,
    variance_one_plate,
    variance_two_plate_exact,
    variance_two_plate_series_smallv,
    variance_two_plate_smallv,
    zeta_two_series,
)

M_E = CONSTANTS.electron_mass_eV


def test_particle_requires_exactly_one_energy_input():
    with pytest.raises(DomainError):
        Particle(charge_e=1.0, mass_eV=M_E)
    with pytest.raises(DomainError):
        Particle(charge_e=1.0, mass_eV=M_E, kinetic_energy_eV=1.0, speed=0.01)
    with pytest.raises(DomainError):
        Particle(charge_e=1.0, mass_eV=M_E, speed=1.0)
    with pytest.raises(DomainError):
        Particle(charge_e=1.0, mass_eV=0.0, speed=0.01)


def test_particle_electron_derives_speed():
    p = Particle.electron(kinetic_energy_eV=1.0)
    assert p.mass_eV == M_E
    assert p.speed_value == pytest.approx(math.sqrt(2.0 / M_E), rel=1e-14)
    assert p.kinetic_eV == 1.0
    q = Particle.electron(speed=0.01)
    assert q.kinetic_eV == pytest.approx(0.5 * M_E * 1e-4, rel=1e-14)


def test_segment_speed_must_match_particle():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.01)
    seg = PathSegment(1.0, 0.05, 0.02)
    with pytest.raises(DomainError):
        variance_one_plate(p, seg)


def test_variance_one_plate_golden():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.01)
    seg = PathSegment(1.0, 0.05, 0.01)
    result = variance_one_plate(p, seg)
    assert result.variance_eV2 == pytest.approx(2.3528784032353669e-07, rel=1e-12)
    assert result.rms_energy_eV == pytest.approx(math.sqrt(result.variance_eV2), rel=1e-15)
    assert result.rms_voltage_V == pytest.approx(result.rms_energy_eV, rel=1e-15)
    assert "exact" in result.regime and "one_plate" in result.regime


def test_variance_scales_with_charge_squared():
    seg = PathSegment(1.0, 0.05, 0.01)
    single = variance_one_plate(Particle(charge_e=1.0, mass_eV=M_E, speed=0.01), seg)
    double = variance_one_plate(Particle(charge_e=2.0, mass_eV=M_E, speed=0.01), seg)
    assert double.variance_eV2 == pytest.approx(4.0 * single.variance_eV2, rel=1e-14)
    # rms voltage is energy spread per unit charge: doubles once, not twice
    assert double.rms_voltage_V == pytest.approx(single.rms_voltage_V, rel=1e-14)


def test_neutral_particle_zero_with_flag():
    p = Particle(charge_e=0.0, mass_eV=M_E, speed=0.01)
    result = variance_one_plate(p, PathSegment(1.0, 0.05, 0.01))
    assert result.variance_eV2 == 0.0
    assert result.rms_voltage_V == 0.0
    assert "neutral" in result.regime


def test_rms_one_plate_smallv_golden():
    # Delta U_rms = e v / (2 pi z0): 1 eV electron at 100 nm gives 1.88e-4 eV
    p = Particle.electron(kinetic_energy_eV=1.0)
    result = rms_one_plate_smallv(p, length_to_natural(100.0))
    assert result.rms_energy_eV == pytest.approx(1.88147820861e-4, rel=1e-11)
    assert "small_v" in result.regime


def test_rms_one_plate_smallv_warns_at_large_speed():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.2)
    with pytest.warns(UserWarning):
        rms_one_plate_smallv(p, 1.0)


def test_validity_window():
    seg = PathSegment(1.0, 0.05, 0.01)
    report = validity_window(seg)
    assert report.lower_bound == pytest.approx(2.0 * 0.01 / math.sqrt(3.0), rel=1e-12)
    assert report.pole_entry == pytest.approx(0.0202020202, rel=1e-9)
    assert report.inside and not report.below_window
    short = validity_window(PathSegment(1.0, 0.005, 0.01))
    assert short.below_window and not short.inside
    long = validity_window(PathSegment(1.0, 2.0, 0.01))
    assert not long.inside


def test_below_window_flagged_in_results():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.01)
    result = variance_one_plate(p, PathSegment(1.0, 0.005, 0.01))
    assert "below_window" in result.regime


def test_variance_two_plate_exact_golden():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.005)
    result = variance_two_plate_exact(p, PathSegment(0.3, 0.005, 0.005), 1.0)
    ratio = result.variance_eV2 / p.charge_natural**2
    assert ratio == pytest.approx(9.3252416830100971e-06, rel=1e-9)
    assert result.terms_used > 0
    assert result.tail_estimate_eV2 <= 1.1e-10 * result.variance_eV2


def test_variance_two_plate_truncation_certified():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.005)
    seg = PathSegment(0.3, 0.005, 0.005)
    loose = variance_two_plate_exact(p, seg, 1.0, SummationControl(tol=1e-6))
    tight = variance_two_plate_exact(p, seg, 1.0, SummationControl(tol=1e-13))
    assert abs(loose.variance_eV2 - tight.variance_eV2) <= loose.tail_estimate_eV2


def test_variance_two_plate_mirror_symmetry():
    # starting z0 from either plate with the same flight gives the same spread
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.01)
    left = variance_two_plate_exact(p, PathSegment(0.2, 0.05, 0.01), 1.0)
    right = variance_two_plate_exact(p, PathSegment(0.75, 0.05, 0.01), 1.0)
    assert left.variance_eV2 == pytest.approx(6.3224835678640e-06, rel=1e-9)
    assert right.variance_eV2 == pytest.approx(left.variance_eV2, rel=1e-12)


def test_variance_two_plate_requires_flight_between_plates():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.01)
    with pytest.raises(DomainError):
        variance_two_plate_exact(p, PathSegment(0.7, 0.4, 0.01), 1.0)
    with pytest.raises(ConvergenceError):
        variance_two_plate_exact(
            p, PathSegment(0.3, 0.005, 0.01), 1.0, SummationControl(n_max=1)
        )


def test_variance_two_plate_smallv_golden():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.005)
    result = variance_two_plate_smallv(p, 0.3, 1.0)
    assert result.variance_eV2 == pytest.approx(1.0667131362055282e-06, rel=1e-12)
    # and against the formula written out
    q, v, a, z0 = p.charge_natural, 0.005, 1.0, 0.3
    expected = q * q * v * v / (12.0 * a * a) * (
        1.0 + 3.0 / math.sin(math.pi * z0 / a) ** 2
    )
    assert result.variance_eV2 == pytest.approx(expected, rel=1e-14)


def test_variance_two_plate_smallv_midpoint_exact():
    # at z0 = a/2 the closed form collapses to q^2 v^2 / (3 a^2)
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.005)
    a = 0.8
    result = variance_two_plate_smallv(p, 0.4, a)
    q = p.charge_natural
    assert result.variance_eV2 == pytest.approx(
        q * q * 0.005**2 / (3.0 * a * a), rel=1e-15
    )


def test_variance_two_plate_smallv_symmetry_exact():
    # z0 and a - z0 give bitwise-identical results by construction
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.005)
    assert (
        variance_two_plate_smallv(p, 0.21, 1.0).variance_eV2
        == variance_two_plate_smallv(p, 0.79, 1.0).variance_eV2
    )


def test_variance_two_plate_smallv_validation():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.005)
    with pytest.raises(DomainError):
        variance_two_plate_smallv(p, 0.0, 1.0)
    with pytest.raises(DomainError):
        variance_two_plate_smallv(p, 1.0, 1.0)


def test_series_smallv_matches_closed_within_tail():
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.01)
    rng = random.Random(314159)
    for _ in range(10):
        z0 = rng.uniform(0.05, 0.95)
        closed = variance_two_plate_smallv(p, z0, 1.0).variance_eV2
        series = variance_two_plate_series_smallv(p, z0, 1.0)
        assert abs(series.variance_eV2 - closed) <= series.tail_estimate_eV2
        assert series.terms_used > 0


def test_smallv_needs_short_flights():
    # at b = 0.01 the dropped image terms are log-enhanced: the closed
    # small-v form undershoots the exact sum by ~12%, far beyond the naive
    # v^2 residual scale, so short-flight validity must be respected
    p = Particle(charge_e=1.0, mass_eV=M_E, speed=0.005)
    exact = variance_two_plate_exact(p, PathSegment(0.3, 0.01, 0.005), 1.0)
    closed = variance_two_plate_smallv(p, 0.3, 1.0)
    rel = abs(exact.variance_eV2 - closed.variance_eV2) / exact.variance_eV2
    assert 0.10 < rel < 0.13


def test_csc_identity_values():
    quarter = csc_identity(0.25)
    assert quarter.closed_form == pytest.approx(2.0 * math.pi**2 - 16.0, rel=1e-14)
    assert abs(quarter.series_value - quarter.closed_form) <= quarter.tail_bound
    half = csc_identity(0.5)
    assert half.closed_form == pytest.approx(math.pi**2 - 4.0, rel=1e-14)
    assert abs(half.series_value - half.closed_form) <= half.tail_bound


def test_csc_identity_validation():
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(DomainError):
            csc_identity(bad)
    with pytest.raises(DomainError):
        csc_identity(0.5, terms=0)


def test_zeta_two_series():
    result = zeta_two_series(terms=10000)
    assert result.closed_form == pytest.approx(math.pi**2 / 3.0, rel=1e-15)
    assert abs(result.series_value - result.closed_form) <= result.tail_bound
    assert result.tail_bound == pytest.approx(2e-4, rel=1e-15)
