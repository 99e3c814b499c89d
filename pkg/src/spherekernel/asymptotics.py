"""Growth of the derivative coefficients in the cosine power.

Each table cell at fixed (n1, n2) is a degree-n1 polynomial in the power
j, so cell(j) / (g[n1, n2] * j^n1) -> 1 as j grows, where the leading
coefficients g satisfy their own integer recursion:

    g[1, 1]   = 1,  g[n1, 0] = 1
    g[n1, n2] = g[n1-1, n2] + (n1 - n2 + 1) * g[n1, n2-1]   (0 < n2 < n1)
    g[n1, n1] = g[n1, n1-1]

The scaled central-binomial sums

    even(j, ell) = 2^(1-2j) sum_{n=1}^{j} (2n)^(2 ell)   C(2j,   j+n)
    odd(j, ell)  = 2^(-2j)  sum_{n=1}^{j} (2n-1)^(2 ell) C(2j-1, j+n-1)

grow like j^ell; they tie the diagonal table cells to the smoothness
classification, and this module measures their convergence empirically.
Sums are exact rationals up to a crossover power and switch to a
compensated log-domain float path above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .derivatives import build_deriv_table
from .errors import UnsupportedRange
from .exact import binomial, log_binomial

# Largest power evaluated in exact rational arithmetic; beyond this the
# log-domain float path takes over (validated to 1e-9 at the crossover).
EXACT_CROSSOVER = 200

_LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class LeadingCoeffTable:
    """Triangular table of exact leading growth coefficients."""

    max_n: int
    cells: dict

    def cell(self, n1: int, n2: int) -> int:
        try:
            return self.cells[(n1, n2)]
        except KeyError:
            raise UnsupportedRange(
                f"cell ({n1}, {n2}) outside leading coefficient table "
                f"with max_n {self.max_n}"
            ) from None


def build_leading_table(max_n: int) -> LeadingCoeffTable:
    """Fill the leading coefficient recursion up to n1 = max_n.

    Rows fill by increasing n1, then increasing n2, with the diagonal
    copied from its left neighbour last.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be positive, got {max_n}")
    cells: dict[tuple[int, int], int] = {}
    for n1 in range(0, max_n + 1):
        cells[(n1, 0)] = 1
        for n2 in range(1, n1):
            cells[(n1, n2)] = cells[(n1 - 1, n2)] + (n1 - n2 + 1) * cells[(n1, n2 - 1)]
        if n1 >= 1:
            cells[(n1, n1)] = cells[(n1, n1 - 1)]
    return LeadingCoeffTable(max_n, cells)


def asymptotic_ratio(j: int, n1: int, n2: int) -> float:
    """cell(j, n1, n2) / (g[n1, n2] * j^n1), exact rational converted last."""
    if n1 < 1 or n2 < 0 or n2 > n1:
        raise UnsupportedRange(f"need 1 <= n1 and 0 <= n2 <= n1, got ({n1}, {n2})")
    if n1 + n2 >= j:
        raise UnsupportedRange(
            f"table cell ({n1}, {n2}) needs power above {n1 + n2}, got {j}"
        )
    cell = build_deriv_table(j, n1 + n2).cell(n1, n2)
    leading = build_leading_table(n1).cell(n1, n2)
    return float(Fraction(cell, leading * j ** n1))


def even_binomial_sum(j: int, ell: int) -> Fraction:
    """Exact value of 2^(1-2j) sum_{n=1}^{j} (2n)^(2 ell) C(2j, j+n)."""
    if j < 1 or ell < 1:
        raise ValueError(f"j and ell must be positive, got j={j}, ell={ell}")
    num = sum((2 * n) ** (2 * ell) * binomial(2 * j, j + n) for n in range(1, j + 1))
    return Fraction(num, 2 ** (2 * j - 1))


def odd_binomial_sum(j: int, ell: int) -> Fraction:
    """Exact value of 2^(-2j) sum_{n=1}^{j} (2n-1)^(2 ell) C(2j-1, j+n-1)."""
    if j < 1 or ell < 1:
        raise ValueError(f"j and ell must be positive, got j={j}, ell={ell}")
    num = sum(
        (2 * n - 1) ** (2 * ell) * binomial(2 * j - 1, j + n - 1)
        for n in range(1, j + 1)
    )
    return Fraction(num, 2 ** (2 * j))


def scaled_sum(j: int, ell: int, parity: str) -> float:
    """sum(j, ell) / j^ell; exact below the crossover, log-domain above."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if j <= EXACT_CROSSOVER:
        exact = even_binomial_sum(j, ell) if parity == "even" else odd_binomial_sum(j, ell)
        return float(exact / Fraction(j) ** ell)
    return _scaled_sum_log(j, ell, parity)


def _scaled_sum_log(j: int, ell: int, parity: str) -> float:
    scale = ell * math.log(j)
    if parity == "even":
        terms = (
            math.exp(
                (1 - 2 * j) * _LN2 + 2 * ell * math.log(2 * n)
                + log_binomial(2 * j, j + n) - scale
            )
            for n in range(1, j + 1)
        )
    else:
        terms = (
            math.exp(
                -2 * j * _LN2 + 2 * ell * math.log(2 * n - 1)
                + log_binomial(2 * j - 1, j + n - 1) - scale
            )
            for n in range(1, j + 1)
        )
    return math.fsum(terms)


@dataclass(frozen=True)
class ConvergenceTrace:
    """Scaled sums along increasing powers, tracking the limit constant."""

    ell: int
    parity: str
    sample_js: tuple[int, ...]
    scaled_values: tuple[float, ...]
    estimated_constant: float


def trace_convergence(
    ell: int, parity: str, sample_js: list[int] | tuple[int, ...]
) -> ConvergenceTrace:
    """Scaled sums v(j) = sum(j, ell)/j^ell over a strictly increasing j grid."""
    js = tuple(int(j) for j in sample_js)
    if not js:
        raise ValueError("sample_js must be nonempty")
    if any(b <= a for a, b in zip(js, js[1:])):
        raise ValueError(f"sample_js must be strictly increasing, got {js}")
    values = tuple(scaled_sum(j, ell, parity) for j in js)
    return ConvergenceTrace(ell, parity, js, values, values[-1])


def limit_constant_report(ell: int, sample_js=(256, 512, 1024, 2048)) -> dict:
    """Empirical limit constants for both parities plus their measured ratios.

    The even/odd ratio and the comparison against 2^ell times the
    diagonal growth coefficient are reported, not asserted: only the
    j^ell growth shape is needed downstream.
    """
    even = trace_convergence(ell, "even", sample_js)
    odd = trace_convergence(ell, "odd", sample_js)
    diag_growth = build_leading_table(ell).cell(ell, ell)
    return {
        "ell": ell,
        "even_constant": even.estimated_constant,
        "odd_constant": odd.estimated_constant,
        "even_over_odd": even.estimated_constant / odd.estimated_constant,
        "even_over_diagonal_growth": even.estimated_constant
        / (2 ** ell * diag_growth),
    }


def traces_to_csv(traces) -> str:
    """CSV export: columns ell, parity, j, scaled_value."""
    lines = ["ell,parity,j,scaled_value"]
    for trace in traces:
        for j, value in zip(trace.sample_js, trace.scaled_values):
            lines.append(f"{trace.ell},{trace.parity},{j},{value!r}")
    return "\n".join(lines) + "\n"


def leading_table_to_csv(table: LeadingCoeffTable) -> str:
    """CSV export: columns n1, n2, value with exact decimal strings."""
    lines = ["n1,n2,value"]
    for (n1, n2), value in sorted(table.cells.items()):
        lines.append(f"{n1},{n2},{value}")
    return "\n".join(lines) + "\n"
