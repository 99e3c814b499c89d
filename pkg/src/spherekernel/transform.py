"""Circle sequence from a Hilbert-sphere sequence, and smoothness classification.

Expanding each cosine power over multiple angles turns the power series
sum_m a_m cos^m(theta) into a cosine series sum_n b_n cos(n theta) whose
coefficients mix binomial slices of (a_m):

    b_0      = sum_{j>=0} 2^(-2j)   a_{2j}   C(2j, j)
    b_{2t}   = sum_{j>=t} 2^(-2j+1) a_{2j}   C(2j, j+t)        t >= 1
    b_{2t-1} = sum_{j>=t} 2^(-2j+2) a_{2j-1} C(2j-1, j+t-1)    t >= 1

The prefactors come from the multiple-angle identities for cos^(2j) and
cos^(2j-1); the central term of the even identity carries no doubling
factor, which fixes the b_0 case.  All b_n are nonnegative, their total
equals the total of (a_m), and each series term is at most twice its
a-coefficient, so certified tails of the input model bound truncation.

Smoothness classification reads decay instead: the even derivative
phi^(2 ell)(0) exists exactly when sum_m a_m m^ell converges (weight
m^(2 ell) in the fixed-dimension reading), decided analytically per
model variant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .asymptotics import build_leading_table
from .derivatives import diagonal_closed_form
from .errors import DivergentSeries, ToleranceUnreachable
from .exact import binomial, log_binomial
from .kernels import phi_eval_inf
from .sequences import (
    Finite,
    PowerLaw,
    SequenceModel,
    converges_weighted,
    term,
    truncation_index,
    weighted_tail_bound,
)

_LN2 = math.log(2.0)

# comb() products stay comfortably inside float range below this row size
_FLOAT_COMB_LIMIT = 400


def _scaled_binomial(n: int, k: int, log2_scale: int) -> float:
    """2**log2_scale * C(n, k) without overflowing intermediate floats."""
    if n <= _FLOAT_COMB_LIMIT:
        return float(binomial(n, k)) * 2.0 ** log2_scale
    return math.exp(log_binomial(n, k) + log2_scale * _LN2)


def circle_coefficient(model: SequenceModel, n: int, tol: float = 1e-12) -> float:
    """Coefficient b_n of the rebuilt cosine series, truncated within tol.

    Finite models are summed exactly; parametric models stop once twice
    the certified remaining coefficient mass drops below tol.
    """
    if n < 0:
        raise ValueError(f"index must be nonnegative, got {n}")
    if tol <= 0.0:
        raise ToleranceUnreachable(f"tolerance must be positive, got {tol}")

    if n == 0:
        j_start, to_m = 0, lambda j: 2 * j
        weight = lambda j: _scaled_binomial(2 * j, j, -2 * j)
    elif n % 2 == 0:
        t = n // 2
        j_start, to_m = t, lambda j: 2 * j
        weight = lambda j: _scaled_binomial(2 * j, j + t, -2 * j + 1)
    else:
        t = (n + 1) // 2
        j_start, to_m = t, lambda j: 2 * j - 1
        weight = lambda j: _scaled_binomial(2 * j - 1, j + t - 1, -2 * j + 2)

    if isinstance(model, Finite):
        j_stop = len(model.terms) // 2 + 1
        return math.fsum(
            term(model, to_m(j)) * weight(j)
            for j in range(j_start, j_stop + 1)
            if to_m(j) < len(model.terms) and model.terms[to_m(j)]
        )

    pieces = []
    j = j_start
    while weighted_tail_bound(model, to_m(j), 0).bound * 2.0 > tol:
        a = term(model, to_m(j))
        if a:
            pieces.append(a * weight(j))
        j += 1
        if to_m(j) > (1 << 26):
            raise ToleranceUnreachable(
                f"coefficient {n} did not reach tolerance {tol} for {model!r}"
            )
    return math.fsum(pieces)


@dataclass(frozen=True)
class CircleSequence:
    """Computed cosine-series coefficients with their per-term error budget."""

    terms: tuple[float, ...]
    max_index: int
    per_term_tol: float


def circle_sequence(
    model: SequenceModel, tol: float = 1e-10, max_terms: int = 4096
) -> CircleSequence:
    """Compute b_0..b_N with N chosen so the dropped tail mass is below tol.

    Since sum_n b_n equals sum_m a_m, the remaining mass after N terms is
    bounded by a tight certified upper bound on the model total minus the
    accumulated partial sum (padded by the per-term error budget).
    """
    if tol <= 0.0:
        raise ToleranceUnreachable(f"tolerance must be positive, got {tol}")
    cutoff = truncation_index(model, 0, tol / 4.0)
    mass_upper = math.fsum(term(model, m) for m in range(cutoff)) + tol / 4.0
    per_tol = tol / 1000.0
    terms: list[float] = []
    partial = 0.0
    for n in range(max_terms + 1):
        b = circle_coefficient(model, n, per_tol)
        terms.append(b)
        partial += b
        if mass_upper - partial + 2.0 * (n + 1) * per_tol <= tol:
            return CircleSequence(tuple(terms), n, per_tol)
    raise ToleranceUnreachable(
        f"circle sequence did not capture the mass of {model!r} within "
        f"{max_terms} terms at tolerance {tol}"
    )


def reconstruct_error(
    model: SequenceModel,
    theta_samples,
    max_index: int,
    tol: float = 1e-10,
) -> float:
    """Max abs difference between the rebuilt cosine series and the power series.

    Compares sum_{n<=max_index} b_n cos(n theta) against the direct
    Hilbert-sphere evaluation over the given angles.
    """
    per_tol = tol / (4.0 * (max_index + 1))
    coeffs = [circle_coefficient(model, n, per_tol) for n in range(max_index + 1)]
    worst = 0.0
    for theta in theta_samples:
        rebuilt = math.fsum(b * math.cos(n * theta) for n, b in enumerate(coeffs))
        direct = phi_eval_inf(model, theta, tol / 4.0)
        worst = max(worst, abs(rebuilt - direct))
    return worst


@dataclass(frozen=True)
class EllVerdict:
    """Convergence verdict for one weight power."""

    ell: int
    converges: bool
    value: float | None  # certified bound on the full weighted sum, when finite


@dataclass(frozen=True)
class SmoothnessReport:
    """Largest usable weight power and the derivative order it certifies.

    max_ell is None when every weighted sum converges (unbounded
    smoothness); otherwise the largest ell with a convergent sum, making
    2*max_ell the highest derivative order that exists at zero.
    """

    max_ell: int | None
    derivative_order: int | None
    per_ell: tuple[EllVerdict, ...]

    def to_dict(self) -> dict:
        unbounded = "unbounded"
        return {
            "max_ell": unbounded if self.max_ell is None else self.max_ell,
            "derivative_order": (
                unbounded if self.derivative_order is None else self.derivative_order
            ),
            "per_ell": [
                {"ell": v.ell, "converges": v.converges, "value": v.value}
                for v in self.per_ell
            ],
        }


def _analytic_max_ell(model: SequenceModel, weight_factor: int) -> int | None:
    """Largest ell with sum a_m m^(weight_factor * ell) finite; None if all are."""
    if isinstance(model, PowerLaw) and model.C != 0.0:
        # weight_factor * ell < p - 1, and ell = 0 always converges (p > 1)
        return max(math.ceil((model.p - 1.0) / weight_factor) - 1, 0)
    return None


def _classify(model: SequenceModel, ell_max_probe: int, weight_factor: int) -> SmoothnessReport:
    if ell_max_probe < 0:
        raise ValueError(f"probe depth must be nonnegative, got {ell_max_probe}")
    verdicts = []
    for ell in range(ell_max_probe + 1):
        conv = converges_weighted(model, weight_factor * ell)
        value = (
            weighted_tail_bound(model, 0, weight_factor * ell).bound if conv else None
        )
        verdicts.append(EllVerdict(ell, conv, value))
    max_ell = _analytic_max_ell(model, weight_factor)
    order = None if max_ell is None else 2 * max_ell
    return SmoothnessReport(max_ell, order, tuple(verdicts))


def classify_inf(model: SequenceModel, ell_max_probe: int = 6) -> SmoothnessReport:
    """Smoothness from Hilbert-sphere decay: weight m^ell at level ell."""
    return _classify(model, ell_max_probe, 1)


def classify_d(model: SequenceModel, ell_max_probe: int = 6) -> SmoothnessReport:
    """Smoothness from fixed-dimension decay: weight k^(2 ell) at level ell."""
    return _classify(model, ell_max_probe, 2)


def derivative_at_zero_series(
    model: SequenceModel, ell: int, tol: float = 1e-10
) -> float:
    """phi^(2 ell)(0) as the termwise sum of cosine-power derivatives.

    Each term contributes a_m * (-1)^ell * diag(m, ell) where diag is the
    closed-form diagonal magnitude.  diag(m, ell) <= g[ell, ell] * m^ell
    with g the diagonal growth coefficient, so a certified weighted tail
    bound scaled by g[ell, ell] controls truncation.
    """
    if ell < 1:
        raise ValueError(f"ell must be positive, got {ell}")
    if not converges_weighted(model, ell):
        raise DivergentSeries(
            f"phi^({2 * ell})(0) does not exist: sum a_m m^{ell} diverges "
            f"for {model!r}"
        )
    growth = build_leading_table(ell).cell(ell, ell)
    cutoff = truncation_index(model, ell, tol / growth)
    total = math.fsum(
        term(model, m) * float(diagonal_closed_form(m, ell))
        for m in range(1, cutoff)
        if term(model, m)
    )
    return (-1) ** ell * total
