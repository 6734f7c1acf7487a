"""Independent quadrature, derivative, and verification oracles."""
import math

import pytest

from casvolt import (
    DomainError,
    PathSegment,
    PoleInsideDomainError,
    QuadratureSpec,
    deriv_check,
    one_plate_integral,
    quad_image,
    quad_one_plate,
    reflected_image_integral,
    run_verification,
    translated_image_integral,
)
from casvolt.closed_forms import reflection_antiderivative
from casvolt.oracle import (
    pole_entry_one_plate,
    pole_entry_reflected,
    pole_entry_translated,
)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=-1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdivisions=0)


def test_quad_one_plate_matches_closed_form():
    seg = PathSegment(1.0, 0.005, 0.01)
    result = quad_one_plate(seg)
    closed = one_plate_integral(seg)
    assert result.value == pytest.approx(closed, rel=1e-12)
    assert abs(result.value - closed) <= result.error_estimate
    assert result.error_estimate <= 1e-9 * abs(closed)


def test_quad_one_plate_refuses_pole_inside_domain():
    # b beyond 2 v z0 / (1 - v) puts the light cone inside the square
    seg = PathSegment(1.0, 0.05, 0.01)
    with pytest.raises(PoleInsideDomainError) as excinfo:
        quad_one_plate(seg)
    assert excinfo.value.threshold == pytest.approx(0.0202020202, rel=1e-8)
    # the closed form continues through the pole and still evaluates
    assert one_plate_integral(seg) > 0.0


def test_quad_image_goldens():
    tiny = PathSegment(0.3, 1e-4, 0.01)
    result = quad_image(tiny, 1.0, 1, "reflected")
    assert result.value == pytest.approx(0.26038702322852106, rel=1e-11)
    assert result.value == pytest.approx(
        reflected_image_integral(tiny, 1.0, 1), rel=1e-12
    )
    seg = PathSegment(0.3, 0.005, 0.005)
    trans = quad_image(seg, 1.0, 1, "translated")
    assert trans.value == pytest.approx(
        translated_image_integral(seg, 1.0, 1), rel=1e-12
    )


def test_quad_image_validation_and_refusal():
    seg = PathSegment(0.3, 0.005, 0.005)
    with pytest.raises(DomainError):
        quad_image(seg, 1.0, 1, "bogus")
    with pytest.raises(DomainError):
        quad_image(seg, 1.0, 0, "reflected")
    with pytest.raises(DomainError):
        quad_image(seg, 0.0, 1, "reflected")
    wide = PathSegment(0.3, 0.5, 0.2)
    threshold = pole_entry_reflected(0.3, 0.2, 1.0, 1)
    assert wide.b >= threshold
    with pytest.raises(PoleInsideDomainError):
        quad_image(wide, 1.0, 1, "reflected")


def test_pole_entry_thresholds():
    assert pole_entry_one_plate(1.0, 0.01) == pytest.approx(0.0202020202, rel=1e-8)
    # reflected images: closer threshold for the n=1 image ahead of the flight
    assert pole_entry_reflected(0.3, 0.01, 1.0, 1) == pytest.approx(
        2.0 * 0.01 * 0.7 / 1.01, rel=1e-12
    )
    assert pole_entry_reflected(0.3, 0.01, 1.0, -1) == pytest.approx(
        2.0 * 0.01 * 1.3 / 0.99, rel=1e-12
    )
    assert pole_entry_translated(0.01, 1.0, 2) == pytest.approx(
        2.0 * 2.0 * 0.01 / 1.01, rel=1e-12
    )
    with pytest.raises(DomainError):
        pole_entry_reflected(0.3, 0.01, 1.0, 0)


def test_deriv_check_reflection():
    report = deriv_check("reflection", 1.0, 1.3, 0.1)
    assert report.converged
    assert report.relative_error < 1e-8
    assert 1.5 < report.observed_order < 2.5


def test_deriv_check_translation():
    report = deriv_check("translation", 0.3, 0.5, 0.1, a=1.0, n=1)
    assert report.converged
    assert report.relative_error < 1e-8


def test_deriv_check_fails_near_singular_locus():
    # (z, z') chosen so the kernel denominator nearly vanishes:
    # z'(1-v) = z(1+v); the identity cannot hold there and must not report
    # convergence
    report = deriv_check("reflection", 1.0, 1.5, 0.2)
    assert not report.converged
    assert report.relative_error > 1e-3


def test_deriv_check_reports_evaluation_failure_gracefully():
    from casvolt import SingularityError

    def exploding(z, z_prime, v, scale):
        raise SingularityError("synthetic failure")

    report = deriv_check("reflection", 1.0, 1.3, 0.1, antiderivative=exploding)
    assert not report.converged
    assert math.isinf(report.relative_error)
    assert "synthetic failure" in report.message


def test_deriv_check_validation():
    with pytest.raises(DomainError):
        deriv_check("bogus", 1.0, 1.3, 0.1)
    with pytest.raises(DomainError):
        deriv_check("translation", 1.0, 1.3, 0.1)  # missing a, n
    with pytest.raises(DomainError):
        deriv_check("reflection", 1.0, 1.3, 0.1, levels=2)


def test_run_verification_passes():
    report = run_verification(seed=12345, sets_per_family=10, grid_points=5)
    assert report.passed
    names = {check.name for check in report.checks}
    assert "quad_one_plate_vs_closed" in names
    assert "quad_reflected_vs_closed" in names
    assert "quad_translated_vs_closed" in names
    assert "deriv_reflection_identity" in names
    assert "deriv_translation_identity" in names
    assert "series_identities_within_tail_bounds" in names
    payload = report.to_dict()
    assert payload["passed"] is True
    assert payload["seed"] == 12345


def test_run_verification_detects_wrong_sign():
    def wrong(z, z_prime, v, scale):
        return -reflection_antiderivative(z, z_prime, v, scale)

    report = run_verification(
        seed=12345, sets_per_family=5, grid_points=3, reflection_override=wrong
    )
    assert not report.passed
    failed = {check.name for check in report.checks if not check.passed}
    assert "quad_one_plate_vs_closed" in failed
    assert "deriv_reflection_identity" in failed
