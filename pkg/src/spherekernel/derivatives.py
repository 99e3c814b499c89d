"""Exact coefficients for repeated derivatives of powers of cosine.

For phi(x) = cos^j(x) the ell-th derivative expands over mixed monomials
indexed by pairs (n1, n2) with n1 + n2 = ell and 0 <= n2 <= n1:

    phi^(ell)(x) = sum (-1)^n1 * T[n1, n2] * cos^(j-n1+n2)(x) * sin^(n1-n2)(x)

where the positive integer table T is filled level by level
(level = n1 + n2) from

    T[0, 0]   = 1
    T[n1, 0]  = T[n1-1, 0] * (j - (n1-1))           edge: falling factorial
    T[n1, n2] = T[n1-1, n2] * (j - (n1-1) + n2)
              + T[n1, n2-1] * (n1 - (n2-1))         interior, 0 < n2 < n1
    T[q, q]   = T[q, q-1]                           diagonal, even level 2q

valid while the level stays strictly below j (larger orders would push
cosine exponents negative, so that range is rejected).  Two independent
cross-checks live alongside the table: a term-rewriting symbolic
differentiator over exact cos/sin polynomials, and closed-form diagonal
values obtained from the multiple-angle expansion of cosine powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedRange
from .exact import binomial, falling_factorial


@dataclass(frozen=True, eq=False)
class DerivTable:
    """Triangular coefficient table for one fixed cosine power."""

    power: int
    max_order: int
    cells: dict

    def cell(self, n1: int, n2: int) -> int:
        try:
            return self.cells[(n1, n2)]
        except KeyError:
            raise UnsupportedRange(
                f"cell ({n1}, {n2}) outside table for power {self.power}, "
                f"max order {self.max_order}"
            ) from None

    def level(self, order: int) -> list[tuple[tuple[int, int], int]]:
        """Cells with n1 + n2 == order, ordered by increasing n2."""
        return sorted(
            ((pair, value) for pair, value in self.cells.items()
             if pair[0] + pair[1] == order),
            key=lambda item: item[0][1],
        )


def build_deriv_table(power: int, max_order: int) -> DerivTable:
    """Fill the coefficient table for cos^power up to the given level.

    Levels are filled in increasing order with n2 ascending inside each
    level, so both parents of an interior cell already exist; the even
    diagonal closes each even level last.
    """
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    if max_order < 1:
        raise ValueError(f"max order must be positive, got {max_order}")
    if max_order >= power:
        raise UnsupportedRange(
            f"table undefined for order {max_order} >= power {power}; "
            "use symbolic_derivative for that range"
        )
    cells: dict[tuple[int, int], int] = {(0, 0): 1}
    for level in range(1, max_order + 1):
        cells[(level, 0)] = cells[(level - 1, 0)] * (power - (level - 1))
        for n2 in range(1, (level + 1) // 2):
            n1 = level - n2
            cells[(n1, n2)] = (
                cells[(n1 - 1, n2)] * (power - (n1 - 1) + n2)
                + cells[(n1, n2 - 1)] * (n1 - (n2 - 1))
            )
        if level % 2 == 0:
            q = level // 2
            cells[(q, q)] = cells[(q, q - 1)]
    return DerivTable(power, max_order, cells)


def cos_power_derivative(power: int, order: int, x: float) -> float:
    """Evaluate d^order/dx^order cos^power at x via the coefficient table."""
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    if order == 0:
        return math.cos(x) ** power
    if order >= power:
        raise UnsupportedRange(
            f"order {order} >= power {power} is outside the table recursion; "
            "use symbolic_derivative"
        )
    table = build_deriv_table(power, order)
    c, s = math.cos(x), math.sin(x)
    total = 0.0
    for (n1, n2), coeff in table.level(order):
        total += (-1) ** n1 * coeff * c ** (power - n1 + n2) * s ** (n1 - n2)
    return total


@dataclass(frozen=True, eq=False)
class SinCosPoly:
    """Integer-coefficient polynomial in cos(x) and sin(x).

    ``terms`` maps (cos_power, sin_power) to a signed integer
    coefficient.  The mixed basis is not unique (sin^2 = 1 - cos^2), so
    equality is decided on the canonical form, which reduces every sin
    power to 0 or 1.
    """

    terms: dict

    def canonical(self) -> "SinCosPoly":
        out: dict[tuple[int, int], int] = {}
        for (a, b), coeff in self.terms.items():
            q, s = divmod(b, 2)
            for i in range(q + 1):
                key = (a + 2 * i, s)
                out[key] = out.get(key, 0) + coeff * math.comb(q, i) * (-1) ** i
        return SinCosPoly({k: v for k, v in out.items() if v})

    def derivative(self) -> "SinCosPoly":
        """One rewrite step: cos^a sin^b -> -a cos^(a-1) sin^(b+1) + b cos^(a+1) sin^(b-1)."""
        out: dict[tuple[int, int], int] = {}
        for (a, b), coeff in self.terms.items():
            if a:
                key = (a - 1, b + 1)
                out[key] = out.get(key, 0) - a * coeff
            if b:
                key = (a + 1, b - 1)
                out[key] = out.get(key, 0) + b * coeff
        return SinCosPoly({k: v for k, v in out.items() if v})

    def evaluate(self, x: float) -> float:
        c, s = math.cos(x), math.sin(x)
        return math.fsum(
            coeff * c ** a * s ** b for (a, b), coeff in self.terms.items()
        )

    def __eq__(self, other):
        if not isinstance(other, SinCosPoly):
            return NotImplemented
        return self.canonical().terms == other.canonical().terms


def symbolic_derivative(power: int, order: int) -> SinCosPoly:
    """order-th derivative of cos^power by repeated term rewriting.

    Independent of the coefficient table: works for every order,
    including order >= power where the table recursion is undefined.
    """
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    poly = SinCosPoly({(power, 0): 1})
    for _ in range(order):
        poly = poly.derivative()
    return poly


def table_polynomial(table: DerivTable, order: int) -> SinCosPoly:
    """The derivative polynomial encoded by one level of the table."""
    if order == 0:
        return SinCosPoly({(table.power, 0): 1})
    if order > table.max_order:
        raise UnsupportedRange(
            f"order {order} exceeds table max order {table.max_order}"
        )
    terms: dict[tuple[int, int], int] = {}
    for (n1, n2), coeff in table.level(order):
        key = (table.power - n1 + n2, n1 - n2)
        terms[key] = terms.get(key, 0) + (-1) ** n1 * coeff
    return SinCosPoly(terms)


def diagonal_closed_form(power: int, ell: int) -> Fraction:
    """Magnitude of d^(2 ell)/dx^(2 ell) cos^power at x = 0, in closed form.

    Uses the multiple-angle expansions

        cos^(2j)(x)   = 2^(-2j)   { sum_{k<j} 2 C(2j, k) cos(2(j-k)x) + C(2j, j) }
        cos^(2j-1)(x) = 2^(-2j+2) sum_{k<j} C(2j-1, k) cos((2j-2k-1)x)

    whose 2*ell-fold derivative at zero turns each angle factor into its
    (2*ell)-th power.  Exact rational; the value equals the diagonal
    table cell T[ell, ell] whenever 2*ell < power, and remains defined
    for every power >= 1.
    """
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    if ell < 1:
        raise ValueError(f"ell must be positive, got {ell}")
    if power % 2 == 0:
        j = power // 2
        num = sum(
            2 * binomial(2 * j, k) * (2 * (j - k)) ** (2 * ell) for k in range(j)
        )
        return Fraction(num, 2 ** (2 * j))
    j = (power + 1) // 2
    num = sum(
        binomial(2 * j - 1, k) * (2 * j - 2 * k - 1) ** (2 * ell) for k in range(j)
    )
    return Fraction(num, 2 ** (2 * j - 2))


def derivative_at_zero(power: int, order: int) -> Fraction:
    """Exact value of d^order/dx^order cos^power at x = 0.

    Odd orders vanish because cos^power is even; even orders 2*ell carry
    the sign (-1)^ell on the closed-form diagonal magnitude.
    """
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    if order == 0:
        return Fraction(1)
    if order % 2 == 1:
        return Fraction(0)
    ell = order // 2
    return (-1) ** ell * diagonal_closed_form(power, ell)


def table_to_csv(table: DerivTable) -> str:
    """CSV export: columns j, n1, n2, value with exact decimal strings."""
    lines = ["j,n1,n2,value"]
    for (n1, n2), value in sorted(
        table.cells.items(), key=lambda item: (item[0][0] + item[0][1], item[0][1])
    ):
        lines.append(f"{table.power},{n1},{n2},{value}")
    return "\n".join(lines) + "\n"


def edge_matches_falling_factorial(table: DerivTable) -> bool:
    """Whether every edge cell (n1, 0) equals power!/(power-n1)!."""
    return all(
        table.cell(n1, 0) == falling_factorial(table.power, n1)
        for n1 in range(0, table.max_order + 1)
    )
