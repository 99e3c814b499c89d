import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spherekernel.derivatives import (
    SinCosPoly,
    build_deriv_table,
    cos_power_derivative,
    derivative_at_zero,
    diagonal_closed_form,
    symbolic_derivative,
    table_polynomial,
    table_to_csv,
)
from spherekernel.errors import UnsupportedRange
from spherekernel.exact import falling_factorial
from spherekernel.verification import finite_difference


def test_base_and_first_cells():
    for power in (2, 5, 9):
        table = build_deriv_table(power, power - 1)
        assert table.cell(0, 0) == 1
        assert table.cell(1, 0) == power


def test_power_four_cells_match_hand_derivative():
    # (cos^4)'' = 12 cos^2 sin^2 - 4 cos^4, worked by the rewrite rule
    table = build_deriv_table(4, 3)
    assert table.cell(2, 0) == 12
    assert table.cell(1, 1) == 4
    assert table.cell(3, 0) == 24
    assert table.cell(2, 1) == 40


def test_even_level_diagonal_copies_left_neighbour():
    table = build_deriv_table(11, 10)
    for q in range(1, 6):
        assert table.cell(q, q) == table.cell(q, q - 1)


def test_edge_cells_are_falling_factorials():
    table = build_deriv_table(9, 8)
    for n1 in range(0, 9):
        assert table.cell(n1, 0) == falling_factorial(9, n1)


def test_table_rejects_order_reaching_power():
    with pytest.raises(UnsupportedRange):
        build_deriv_table(4, 4)
    with pytest.raises(UnsupportedRange):
        build_deriv_table(1, 1)
    with pytest.raises(ValueError):
        build_deriv_table(0, 1)


def test_cell_outside_table_raises():
    table = build_deriv_table(6, 2)
    with pytest.raises(UnsupportedRange):
        table.cell(3, 0)


def test_symbolic_derivative_small_cases():
    assert symbolic_derivative(2, 1) == SinCosPoly({(1, 1): -2})
    assert symbolic_derivative(4, 2) == SinCosPoly({(2, 2): 12, (4, 0): -4})
    assert symbolic_derivative(3, 2) == SinCosPoly({(1, 2): 6, (3, 0): -3})


def test_symbolic_derivative_handles_order_at_least_power():
    # the rewrite rule works where the table recursion does not
    poly = symbolic_derivative(2, 4)
    for x in (0.0, 0.7, 2.0):
        expected = 8.0 * math.cos(2.0 * x)  # (cos^2)'''' = 8 cos(2x)
        assert poly.evaluate(x) == pytest.approx(expected, abs=1e-12)


def test_table_polynomial_equals_symbolic_oracle_sample():
    for power, order in ((5, 3), (8, 4), (12, 7)):
        table = build_deriv_table(power, order)
        assert table_polynomial(table, order) == symbolic_derivative(power, order)


@settings(max_examples=60)
@given(
    power=st.integers(min_value=1, max_value=9),
    order=st.integers(min_value=0, max_value=6),
    x=st.floats(min_value=-3.0, max_value=3.0),
)
def test_canonical_form_preserves_value(power, order, x):
    poly = symbolic_derivative(power, order)
    canon = poly.canonical()
    assert all(b in (0, 1) for (_, b) in canon.terms)
    assert canon.evaluate(x) == pytest.approx(poly.evaluate(x), abs=1e-8)


def test_mixed_basis_equality_requires_canonicalization():
    # sin^2 and 1 - cos^2 are distinct dicts but the same function
    left = SinCosPoly({(0, 2): 1})
    right = SinCosPoly({(0, 0): 1, (2, 0): -1})
    assert left.terms != right.terms
    assert left == right


def test_deriv_eval_order_zero_and_one():
    for power in (2, 5):
        for x in (0.0, 0.4, 1.7):
            assert cos_power_derivative(power, 0, x) == pytest.approx(
                math.cos(x) ** power, rel=1e-15
            )
            expected = -power * math.cos(x) ** (power - 1) * math.sin(x)
            assert cos_power_derivative(power, 1, x) == pytest.approx(expected, abs=1e-15)


def test_deriv_eval_rejects_unsupported_order():
    with pytest.raises(UnsupportedRange):
        cos_power_derivative(4, 4, 0.3)


def test_deriv_eval_matches_finite_difference():
    worst = 0.0
    for power in range(2, 11):
        for order in range(1, min(5, power)):
            for x in (0.0, 0.3, 1.0, 2.5):
                direct = cos_power_derivative(power, order, x)
                estimate = finite_difference(
                    lambda u, p=power: math.cos(u) ** p, x, order, 1e-2
                )
                worst = max(worst, abs(direct - estimate))
    assert worst <= 1e-6


def test_diagonal_closed_form_frozen_values():
    assert diagonal_closed_form(4, 1) == 4
    assert diagonal_closed_form(3, 1) == 3
    assert diagonal_closed_form(6, 1) == 6
    assert diagonal_closed_form(1, 1) == 1
    # integrality beyond the table range is not assumed: cos(x) has
    # fourth derivative 1 at zero, cos^2 has 8 cos(2x)/... = 8
    assert diagonal_closed_form(2, 2) == 8


def test_diagonal_closed_form_matches_table_cells():
    for power in (7, 12, 21):
        table = build_deriv_table(power, power - 1)
        for ell in range(1, (power - 1) // 2 + 1):
            assert Fraction(table.cell(ell, ell)) == diagonal_closed_form(power, ell)


def test_derivative_at_zero():
    assert derivative_at_zero(5, 1) == 0
    assert derivative_at_zero(4, 2) == -4
    assert derivative_at_zero(1, 2) == -1
    assert derivative_at_zero(3, 0) == 1
    assert derivative_at_zero(6, 4) == diagonal_closed_form(6, 2)


def test_derivative_at_zero_matches_symbolic_oracle():
    for power in range(1, 8):
        for order in range(0, 9):
            expected = Fraction(symbolic_derivative(power, order).evaluate(0.0))
            got = derivative_at_zero(power, order)
            assert got == pytest.approx(float(expected), abs=1e-9)


def test_all_table_entries_positive():
    for power in (3, 8, 15):
        table = build_deriv_table(power, power - 1)
        assert all(value > 0 for value in table.cells.values())


def test_closed_form_fractions_are_normalized():
    for power, ell in ((4, 1), (9, 3), (30, 6)):
        value = diagonal_closed_form(power, ell)
        assert value.denominator > 0
        assert math.gcd(value.numerator, value.denominator) == 1


def test_table_csv_export():
    text = table_to_csv(build_deriv_table(4, 2))
    lines = text.strip().splitlines()
    assert lines[0] == "j,n1,n2,value"
    assert "4,1,0,4" in lines
    assert "4,2,0,12" in lines
    assert "4,1,1,4" in lines
    assert len(lines) == 5
