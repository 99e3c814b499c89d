import math
from fractions import Fraction

import pytest

from spherekernel.asymptotics import build_leading_table
from spherekernel.derivatives import diagonal_closed_form
from spherekernel.errors import DivergentSeries, ToleranceUnreachable
from spherekernel.kernels import phi_eval_inf
from spherekernel.sequences import Finite, Geometric, PoissonType, PowerLaw
from spherekernel.transform import (
    circle_coefficient,
    circle_sequence,
    classify_d,
    classify_inf,
    derivative_at_zero_series,
    reconstruct_error,
)
from spherekernel.verification import finite_difference, fixture_models

THETAS = [0.0, 0.3, math.pi / 2, 2.1, math.pi]


def test_cos_squared_expansion_exact():
    model = Finite((0.0, 0.0, 1.0))
    assert circle_coefficient(model, 0) == pytest.approx(0.5, abs=1e-15)
    assert circle_coefficient(model, 2) == pytest.approx(0.5, abs=1e-15)
    assert circle_coefficient(model, 1) == 0.0
    assert circle_coefficient(model, 4) == 0.0


def test_cos_cubed_expansion_exact():
    model = Finite((0.0, 0.0, 0.0, 1.0))
    assert circle_coefficient(model, 1) == pytest.approx(0.75, abs=1e-15)
    assert circle_coefficient(model, 3) == pytest.approx(0.25, abs=1e-15)
    assert circle_coefficient(model, 0) == 0.0
    assert circle_coefficient(model, 2) == 0.0


def test_constant_model_passes_through():
    model = Finite((1.0,))
    assert circle_coefficient(model, 0) == 1.0
    assert all(circle_coefficient(model, n) == 0.0 for n in range(1, 5))


def test_circle_coefficient_validation():
    with pytest.raises(ValueError):
        circle_coefficient(Finite((1.0,)), -1)
    with pytest.raises(ToleranceUnreachable):
        circle_coefficient(Geometric(1.0, 0.5), 0, 0.0)


def test_monomial_reconstruction_is_exact():
    for m in range(0, 9):
        model = Finite((0.0,) * m + (1.0,))
        err = reconstruct_error(model, THETAS, m, 1e-12)
        assert err <= 1e-13


def test_geometric_reconstruction_against_closed_form():
    model = Geometric(0.5, 0.5)
    seq = circle_sequence(model, 1e-11)
    for theta in THETAS:
        rebuilt = sum(b * math.cos(n * theta) for n, b in enumerate(seq.terms))
        want = 0.5 / (1.0 - 0.5 * math.cos(theta))
        assert rebuilt == pytest.approx(want, abs=1e-10)


def test_circle_sequence_mass_matches_model_mass():
    for model in (Geometric(1.0, 0.3), PoissonType(2.0), Finite((0.5, 0.25, 0.25))):
        seq = circle_sequence(model, 1e-10)
        circle_mass = math.fsum(seq.terms)
        model_mass = phi_eval_inf(model, 0.0, 1e-12)
        assert circle_mass == pytest.approx(model_mass, abs=1e-9)
        assert all(b >= -seq.per_term_tol for b in seq.terms)


def test_reconstruct_error_fixture_sweep():
    for model in fixture_models():
        seq = circle_sequence(model, 1e-10)
        err = reconstruct_error(model, THETAS, seq.max_index, 1e-10)
        assert err <= 1e-9, (model, err)


def test_classify_inf_examples():
    assert classify_inf(PowerLaw(1.0, 4.5)).max_ell == 3
    assert classify_inf(PowerLaw(1.0, 4.5)).derivative_order == 6
    assert classify_inf(PowerLaw(1.0, 2.2)).max_ell == 1
    assert classify_inf(Geometric(1.0, 0.5)).max_ell is None
    assert classify_inf(PoissonType(2.0)).max_ell is None
    assert classify_inf(Finite((1.0, 1.0))).max_ell is None


def test_classify_d_examples():
    assert classify_d(PowerLaw(1.0, 4.5)).max_ell == 1
    assert classify_d(Finite((3.0, 2.0, 1.0))).max_ell is None
    assert classify_d(PoissonType(2.0)).max_ell is None


def test_classify_reports_per_ell_verdicts():
    report = classify_inf(PowerLaw(1.0, 4.5), ell_max_probe=6)
    converges = [v.converges for v in report.per_ell]
    assert converges == [True, True, True, True, False, False, False]
    assert all(v.value is not None for v in report.per_ell if v.converges)
    assert all(v.value is None for v in report.per_ell if not v.converges)
    # convergence is monotone: once false, always false
    assert sorted(converges, reverse=True) == converges


def test_classifier_weight_consistency_on_powerlaws():
    for p in (1.5, 2.2, 3.0, 4.5, 8.0):
        model = PowerLaw(1.0, p)
        d_report = classify_d(model, 5)
        inf_report = classify_inf(model, 10)
        for verdict in d_report.per_ell:
            assert verdict.converges == inf_report.per_ell[2 * verdict.ell].converges


def test_report_json_shape():
    data = classify_inf(Geometric(1.0, 0.5), 2).to_dict()
    assert data["max_ell"] == "unbounded"
    assert data["derivative_order"] == "unbounded"
    assert data["per_ell"][0]["ell"] == 0
    bounded = classify_inf(PowerLaw(1.0, 2.2), 2).to_dict()
    assert bounded["max_ell"] == 1
    assert bounded["derivative_order"] == 2


def test_derivative_series_single_cosine():
    assert derivative_at_zero_series(Finite((0.0, 1.0)), 1) == pytest.approx(-1.0, abs=1e-12)


def test_derivative_series_frozen_closed_forms():
    # phi = 0.5/(1 - 0.5 cos): phi''(0) = -1 and phi''''(0) = 7
    model = Geometric(0.5, 0.5)
    assert derivative_at_zero_series(model, 1, 1e-12) == pytest.approx(-1.0, abs=1e-9)
    assert derivative_at_zero_series(model, 2, 1e-12) == pytest.approx(7.0, abs=1e-9)
    # phi = exp(-2) exp(2 cos): phi''(0) = -2 and phi''''(0) = 14
    poisson = PoissonType(2.0)
    assert derivative_at_zero_series(poisson, 1, 1e-12) == pytest.approx(-2.0, abs=1e-9)
    assert derivative_at_zero_series(poisson, 2, 1e-12) == pytest.approx(14.0, abs=1e-9)


def test_derivative_series_matches_finite_difference():
    for ell, step in ((1, 1e-2), (2, 3e-2)):
        for model in (Geometric(0.5, 0.5), PoissonType(0.5), Finite((0.0, 0.5, 0.5))):
            series = derivative_at_zero_series(model, ell, 1e-12)
            estimate = finite_difference(
                lambda u, m=model: phi_eval_inf(m, u, 1e-13), 0.0, 2 * ell, step
            )
            assert series == pytest.approx(estimate, abs=1e-5)


def test_derivative_series_divergence():
    with pytest.raises(DivergentSeries):
        derivative_at_zero_series(PowerLaw(1.0, 4.5), 4)
    with pytest.raises(ValueError):
        derivative_at_zero_series(Geometric(1.0, 0.5), 0)


def test_diagonal_growth_domination():
    # the truncation constant used by derivative_at_zero_series:
    # diag(m, ell) <= g[ell, ell] * m^ell for every power m >= 1
    table = build_leading_table(6)
    for ell in range(1, 7):
        cap = table.cell(ell, ell)
        for m in range(1, 80):
            assert diagonal_closed_form(m, ell) <= cap * Fraction(m) ** ell
