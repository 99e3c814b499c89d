from fractions import Fraction

import pytest

from spherekernel.asymptotics import (
    EXACT_CROSSOVER,
    _scaled_sum_log,
    asymptotic_ratio,
    build_leading_table,
    even_binomial_sum,
    leading_table_to_csv,
    limit_constant_report,
    odd_binomial_sum,
    scaled_sum,
    trace_convergence,
    traces_to_csv,
)
from spherekernel.derivatives import diagonal_closed_form
from spherekernel.errors import UnsupportedRange


def test_leading_table_base_cases():
    table = build_leading_table(5)
    assert table.cell(1, 1) == 1
    assert table.cell(3, 0) == 1
    assert table.cell(2, 1) == 3
    assert table.cell(2, 2) == 3


def test_leading_table_known_rows():
    table = build_leading_table(5)
    assert table.cell(3, 2) == 15
    assert table.cell(3, 3) == 15
    assert table.cell(4, 4) == 105
    assert table.cell(5, 5) == 945


def test_leading_diagonal_is_double_factorial():
    table = build_leading_table(10)
    value = 1
    for n in range(1, 11):
        value *= 2 * n - 1
        assert table.cell(n, n) == value


def test_leading_table_entries_positive():
    table = build_leading_table(12)
    assert all(value > 0 for value in table.cells.values())


def test_leading_table_cell_out_of_range():
    with pytest.raises(UnsupportedRange):
        build_leading_table(3).cell(4, 0)


def test_asymptotic_ratio_base_cells_exact():
    for j in (10, 100, 2048):
        assert asymptotic_ratio(j, 1, 0) == 1.0
        assert asymptotic_ratio(j, 1, 1) == 1.0


def test_asymptotic_ratio_frozen_value():
    # cell (2, 1) is 3j^2 - 2j, so the ratio at j=100 is 29800/30000
    assert asymptotic_ratio(100, 2, 1) == pytest.approx(float(Fraction(149, 150)), abs=0)


def test_asymptotic_ratio_near_one_at_large_power():
    assert abs(asymptotic_ratio(2048, 4, 2) - 1.0) < 0.05


def test_asymptotic_ratio_range_check():
    with pytest.raises(UnsupportedRange):
        asymptotic_ratio(5, 3, 3)
    with pytest.raises(UnsupportedRange):
        asymptotic_ratio(10, 2, 3)


def test_binomial_sums_frozen_values():
    assert even_binomial_sum(2, 1) == 4
    assert even_binomial_sum(3, 1) == 6
    assert even_binomial_sum(1, 1) == 2
    assert odd_binomial_sum(2, 1) == Fraction(3, 4)
    assert odd_binomial_sum(1, 1) == Fraction(1, 4)
    assert odd_binomial_sum(2, 2) == Fraction(21, 4)


def test_cross_identity_with_diagonal_closed_form():
    for ell in range(1, 7):
        for j in range(ell + 1, 15):
            assert even_binomial_sum(j, ell) == diagonal_closed_form(2 * j, ell)
            assert 4 * odd_binomial_sum(j, ell) == diagonal_closed_form(2 * j - 1, ell)


def test_scaled_sum_exact_path_values():
    # even sums at ell=1 equal 2j, so the scaled value is constant 2
    assert scaled_sum(2, 1, "even") == 2.0
    assert scaled_sum(3, 1, "even") == 2.0
    assert scaled_sum(2, 1, "odd") == pytest.approx(0.375, abs=0)


def test_scaled_sum_log_path_matches_exact_at_crossover():
    j = EXACT_CROSSOVER
    for ell in (1, 3, 5):
        for parity in ("even", "odd"):
            exact = scaled_sum(j, ell, parity)
            logged = _scaled_sum_log(j, ell, parity)
            assert logged == pytest.approx(exact, rel=1e-9)


def test_trace_convergence_structure():
    trace = trace_convergence(1, "even", [2, 3])
    assert trace.sample_js == (2, 3)
    assert trace.scaled_values == (2.0, 2.0)
    assert trace.estimated_constant == 2.0


def test_trace_requires_increasing_js():
    with pytest.raises(ValueError):
        trace_convergence(1, "even", [4, 4])
    with pytest.raises(ValueError):
        trace_convergence(1, "even", [])
    with pytest.raises(ValueError):
        scaled_sum(4, 1, "sideways")


def test_trace_flattens_at_large_powers():
    for parity in ("even", "odd"):
        trace = trace_convergence(2, parity, [256, 512, 1024, 2048])
        v = trace.scaled_values
        assert abs(v[-1] / v[-2] - 1.0) <= 0.02


def test_limit_constant_report_shape():
    report = limit_constant_report(1, (64, 128, 256))
    assert report["ell"] == 1
    assert report["even_constant"] == pytest.approx(2.0, rel=1e-6)
    # the even and odd limits differ by a fixed factor of 4 (measured, not asserted)
    assert report["even_over_odd"] == pytest.approx(4.0, rel=0.05)
    assert report["even_over_diagonal_growth"] == pytest.approx(1.0, rel=0.01)


def test_csv_exports():
    trace = trace_convergence(1, "even", [2, 3])
    text = traces_to_csv([trace])
    assert text.splitlines()[0] == "ell,parity,j,scaled_value"
    assert "1,even,2,2.0" in text
    table_text = leading_table_to_csv(build_leading_table(2))
    assert "2,1,3" in table_text.splitlines()
