import math

import numpy as np
import pytest

import derham as dr
from derham.errors import DomainError
from derham.ifs_core import DeRhamSystem, DifferentiableMap


def test_map_eval_affine():
    f = DifferentiableMap("affine", (0.5, 0.25))
    assert dr.map_eval(f, 0.5) == 0.5


def test_map_eval_polynomial_horner():
    # x^3/4 + x/12 at x = 1
    f = DifferentiableMap("polynomial", (0.0, 1.0 / 12.0, 0.0, 0.25))
    assert abs(dr.map_eval(f, 1.0) - 1.0 / 3.0) < 1e-15


def test_map_eval_moebius_half():
    f = DifferentiableMap("moebius", (1.0, 0.0, 1.0, 1.0))
    assert dr.map_eval(f, 1.0) == 0.5


def test_map_eval_conjugate_affine():
    eta = complex(0.5, math.sqrt(3) / 6)
    f = DifferentiableMap("conjugate_affine", (eta.real, eta.imag, 0.0, 0.0))
    assert dr.map_eval(f, 1.0 + 0.0j) == eta
    assert dr.map_eval(f, 1.0j) == eta * -1.0j


def test_map_eval_rejects_outside_interval():
    f = DifferentiableMap("affine", (0.5, 0.0))
    with pytest.raises(DomainError):
        dr.map_eval(f, 1.5)


def test_moebius_pole_is_domain_error():
    f = DifferentiableMap("moebius", (0.0, 1.0, -1.0, 1.0))
    with pytest.raises(DomainError):
        dr.map_eval(f, 1.0)


def test_moebius_degenerate_params_rejected():
    with pytest.raises(DomainError):
        DifferentiableMap("moebius", (1.0, 0.0, 0.0, 0.0))


def test_param_arity_enforced():
    with pytest.raises(DomainError):
        DifferentiableMap("affine", (0.5,))


def test_jacobian_coordinate_diag():
    f = DifferentiableMap("coordinate_affine_2d", (0.5, 0.0, 1.0 / 3.0, 0.0))
    j = dr.map_jacobian(f, 0.2 + 0.7j)
    assert j.entries == ((0.5, 0.0), (0.0, 1.0 / 3.0))
    smax, smin = dr.jacobian_norms(j)
    assert smax == 0.5
    assert abs(smin - 1.0 / 3.0) < 1e-15


def test_jacobian_norms_rank_deficient():
    # diag(1/2, 0): smallest singular value is 0, not small
    j = dr.Jacobian(((0.5, 0.0), (0.0, 0.0)))
    assert dr.jacobian_norms(j) == (0.5, 0.0)


def test_jacobian_norms_conjugate_is_isometric_scaling():
    f = DifferentiableMap("conjugate_affine", (0.3, 0.4, 0.0, 0.0))
    smax, smin = dr.jacobian_norms(dr.map_jacobian(f, 0.1 + 0.1j))
    assert abs(smax - 0.5) < 1e-15
    assert abs(smin - 0.5) < 1e-15


def test_jacobian_scalar_derivative():
    f = DifferentiableMap("polynomial", (0.0, 0.0, 0.5))  # x^2/2
    j = dr.map_jacobian(f, 0.25)
    assert j.entries == ((0.25,),)
    assert dr.jacobian_norms(j) == (0.25, 0.25)


def test_fixed_point_affine_closed_form():
    f = DifferentiableMap("affine", (0.5, 0.25))
    assert dr.fixed_point(f) == 0.5


def test_fixed_point_moebius_endpoint():
    # 1/(2-x) has a parabolic fixed point at 1; iteration alone stalls there
    f = DifferentiableMap("moebius", (0.0, 1.0, -1.0, 2.0))
    assert dr.fixed_point(f) == 1.0


def test_fixed_point_polynomial_iterated():
    f = DifferentiableMap("polynomial", (0.0, 0.0, 0.5))
    x = dr.fixed_point(f)
    assert abs(x) < 1e-13
    assert abs(dr.map_eval(f, x) - x) <= 1e-14


def test_fixed_point_conjugate_affine():
    f = DifferentiableMap("conjugate_affine", (0.5, -math.sqrt(3) / 6, 0.5, math.sqrt(3) / 6))
    assert abs(dr.fixed_point(f) - 1.0) < 1e-12


def test_endpoint_fixes_cantor(cantor):
    assert dr.endpoint_fixes(cantor) == (0.0, 1.0)


def test_validate_every_preset():
    cases = [("cantor", ()), ("bernoulli", (0.25, 0.75)), ("okamoto", (0.2, 0.6)),
             ("minkowski_inverse", ()), ("derham", (0.5, 0.288675)),
             ("example_2_2_i", ()), ("example_2_2_ii", ()), ("remark_2_5", ()),
             ("hata_yamaguti", (0.1,)), ("example_2_8_i", (0.1,)),
             ("example_2_8_ii", (0.1,))]
    for name, args in cases:
        report = dr.validate_system(dr.build_preset(name, args))
        assert report.passed, f"{name}: {report.summary()}"
        assert max(report.junction_residuals) <= 1e-12


def test_validate_minkowski_norm_attains_one(minkowski):
    """Lip(f_i) = 1 at the endpoints, yet both maps are weak contractions."""
    report = dr.validate_system(minkowski)
    assert report.passed
    assert max(b.max_norm for b in report.branches) == 1.0
    assert all(b.max_lipschitz < 1.0 for b in report.branches)


def test_validate_rejects_expansion():
    bad = DeRhamSystem(m=2, branches=(
        DifferentiableMap("affine", (1.5, 0.0)),
        DifferentiableMap("affine", (0.5, 0.5)),
    ))
    report = dr.validate_system(bad)
    assert not report.passed
    assert report.branches[0].max_norm > 1.0


def test_validate_reports_junction_gap():
    # fixes are 0 and 0.9, so f0(0.9) = 0.45 meets f1(0) = 0.6: gap 0.15
    bad = DeRhamSystem(m=2, branches=(
        DifferentiableMap("affine", (0.5, 0.0)),
        DifferentiableMap("affine", (1.0 / 3.0, 0.6)),
    ))
    report = dr.validate_system(bad)
    assert not report.passed
    assert abs(report.junction_residuals[0] - 0.15) < 1e-12


def test_validate_rejects_escape_from_interval():
    bad = DeRhamSystem(m=2, branches=(
        DifferentiableMap("affine", (0.5, 0.6)),
        DifferentiableMap("affine", (0.5, 0.5)),
    ))
    report = dr.validate_system(bad)
    assert not report.passed
    assert not report.branches[0].maps_into_domain


def test_system_rejects_wrong_branch_count():
    with pytest.raises(DomainError):
        DeRhamSystem(m=3, branches=(
            DifferentiableMap("affine", (0.5, 0.0)),
            DifferentiableMap("affine", (0.5, 0.5)),
        ))


def test_system_rejects_space_mismatch():
    with pytest.raises(DomainError):
        DeRhamSystem(m=2, branches=(
            DifferentiableMap("conjugate_affine", (0.5, 0.0, 0.0, 0.0)),
            DifferentiableMap("conjugate_affine", (0.5, 0.0, 0.5, 0.0)),
        ), space="interval")


def test_apply_map_array_matches_scalar(minkowski):
    from derham.ifs_core import apply_map_array

    xs = np.linspace(0.0, 1.0, 17)
    for b in minkowski.branches:
        vec, _ = apply_map_array(b, xs.copy(), None)
        ref = np.array([dr.map_eval(b, float(x)) for x in xs])
        assert np.max(np.abs(vec - ref)) == 0.0
