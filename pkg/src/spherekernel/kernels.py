"""Series evaluation of isotropic positive definite functions on spheres.

On the d-dimensional sphere the expansion runs over normalized
ultraspherical (Gegenbauer) polynomials with lam = (d-1)/2:

    phi(theta) = sum_k a_k * C_k^lam(cos theta) / C_k^lam(1)

and on the infinite-dimensional (Hilbert) sphere over plain cosine powers:

    phi(theta) = sum_m a_m * cos(theta)^m.

Every normalized basis function is bounded by 1 in absolute value on
[-1, 1], so certified coefficient tail bounds control truncation error
directly.  Nonnegative summable coefficients make both series positive
definite; psd_spot_check probes that numerically on finite point sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DimensionMismatch
from .sequences import (
    SequenceModel,
    term,
    total_mass_bound,
    truncation_index,
)


@dataclass(frozen=True)
class KernelSpec:
    """A kernel given by its sphere and its coefficient sequence.

    ``dimension`` is the sphere dimension d >= 1, or None for the
    Hilbert sphere (the infinite-dimensional limit).
    """

    dimension: int | None
    coefficients: SequenceModel

    def __post_init__(self):
        if self.dimension is not None and self.dimension < 1:
            raise ValueError(f"sphere dimension must be >= 1, got {self.dimension}")

    @property
    def lam(self) -> float:
        """Ultraspherical index (d - 1) / 2 of the finite-dimensional sphere."""
        if self.dimension is None:
            raise ValueError("the Hilbert sphere has no ultraspherical index")
        return (self.dimension - 1) / 2.0


@dataclass(frozen=True)
class UnitVector:
    """Point on a sphere, stored as ambient coordinates with unit norm."""

    components: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(float(c) for c in self.components))
        norm = math.sqrt(math.fsum(c * c for c in self.components))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"components must have unit norm, got norm {norm!r}")

    def __len__(self) -> int:
        return len(self.components)


def gegenbauer_normalized(k: int, lam: float, t: float) -> float:
    """C_k^lam(t) / C_k^lam(1) by the standard three-term recurrence.

    lam must be a nonnegative half-integer (lam = (d-1)/2 for an integer
    dimension d >= 1).  At lam = 0 the normalized limit is the Chebyshev
    polynomial cos(k * arccos t).  t may exceed [-1, 1] by at most 1e-12
    and is clamped.
    """
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    if lam < 0 or abs(2.0 * lam - round(2.0 * lam)) > 1e-9:
        raise ValueError(f"lam must be a nonnegative half-integer, got {lam}")
    if abs(t) > 1.0 + 1e-12:
        raise ValueError(f"argument must lie in [-1, 1], got {t}")
    t = max(-1.0, min(1.0, t))
    if lam == 0.0:
        return math.cos(k * math.acos(t))
    if k == 0:
        return 1.0
    # run the recurrence at t and at 1 simultaneously; the normalizer at 1
    # equals binomial(k + 2 lam - 1, k) and stays positive
    c_prev, c_cur = 1.0, 2.0 * lam * t
    n_prev, n_cur = 1.0, 2.0 * lam
    for kk in range(2, k + 1):
        c_next = (2.0 * t * (kk + lam - 1.0) * c_cur - (kk + 2.0 * lam - 2.0) * c_prev) / kk
        n_next = (2.0 * (kk + lam - 1.0) * n_cur - (kk + 2.0 * lam - 2.0) * n_prev) / kk
        c_prev, c_cur = c_cur, c_next
        n_prev, n_cur = n_cur, n_next
    return c_cur / n_cur


@lru_cache(maxsize=128)
def _coefficient_prefix(model: SequenceModel, tol: float) -> tuple[float, ...]:
    # coefficients up to a certified truncation point for the plain sum
    cutoff = truncation_index(model, 0, tol)
    return tuple(term(model, m) for m in range(cutoff))


def _as_model(spec) -> SequenceModel:
    return spec.coefficients if isinstance(spec, KernelSpec) else spec


def phi_eval_inf(spec, theta: float, tol: float = 1e-10) -> float:
    """Hilbert-sphere series sum_m a_m cos^m(theta), truncated within tol.

    Accepts a KernelSpec (with dimension None) or a bare SequenceModel.
    """
    if isinstance(spec, KernelSpec) and spec.dimension is not None:
        raise ValueError("phi_eval_inf needs a Hilbert-sphere spec (dimension None)")
    coeffs = _coefficient_prefix(_as_model(spec), tol)
    u = math.cos(theta)
    total = 0.0
    for a in reversed(coeffs):
        total = total * u + a
    return total


def phi_eval_d(spec: KernelSpec, theta: float, tol: float = 1e-10) -> float:
    """d-sphere series sum_k a_k C_k^lam(cos theta)/C_k^lam(1) within tol.

    The remainder after truncation is bounded by the coefficient tail
    because the normalized polynomials are bounded by 1.
    """
    if not isinstance(spec, KernelSpec) or spec.dimension is None:
        raise ValueError("phi_eval_d needs a KernelSpec with a finite dimension")
    coeffs = _coefficient_prefix(spec.coefficients, tol)
    if not coeffs:
        return 0.0
    d = spec.dimension
    if d == 1:
        return math.fsum(a * math.cos(k * theta) for k, a in enumerate(coeffs))
    lam = spec.lam
    t = math.cos(theta)
    total = coeffs[0]
    if len(coeffs) == 1:
        return total
    c_prev, c_cur = 1.0, 2.0 * lam * t
    n_prev, n_cur = 1.0, 2.0 * lam
    total += coeffs[1] * (c_cur / n_cur)
    for k in range(2, len(coeffs)):
        c_next = (2.0 * t * (k + lam - 1.0) * c_cur - (k + 2.0 * lam - 2.0) * c_prev) / k
        n_next = (2.0 * (k + lam - 1.0) * n_cur - (k + 2.0 * lam - 2.0) * n_prev) / k
        c_prev, c_cur = c_cur, c_next
        n_prev, n_cur = n_cur, n_next
        if coeffs[k]:
            total += coeffs[k] * (c_cur / n_cur)
    return total


def phi_eval(spec: KernelSpec, theta: float, tol: float = 1e-10) -> float:
    """Evaluate the kernel series on whichever sphere ``spec`` names."""
    if spec.dimension is None:
        return phi_eval_inf(spec, theta, tol)
    return phi_eval_d(spec, theta, tol)


def geodesic_distance(xi: UnitVector, zeta: UnitVector) -> float:
    """arccos of the dot product, clamped to [-1, 1] to absorb rounding."""
    if len(xi) != len(zeta):
        raise DimensionMismatch(
            f"vectors have lengths {len(xi)} and {len(zeta)}"
        )
    dot = math.fsum(a * b for a, b in zip(xi.components, zeta.components))
    return math.acos(max(-1.0, min(1.0, dot)))


@dataclass(frozen=True)
class PsdVerdict:
    """Outcome of a quadratic-form positive definiteness probe."""

    value: float
    threshold: float
    passed: bool


def psd_spot_check(
    spec: KernelSpec,
    points: list[UnitVector],
    weights: list[float],
    tol: float = 1e-10,
) -> PsdVerdict:
    """Evaluate sum_ij w_i w_j phi(dist(x_i, x_j)) and test nonnegativity.

    The pass threshold -tol * (sum |w|)^2 * (coefficient mass) scales
    with the weight and coefficient magnitudes, so the verdict is
    invariant under rescaling either.
    """
    if len(points) != len(weights):
        raise DimensionMismatch(
            f"{len(points)} points but {len(weights)} weights"
        )
    dims = {len(p) for p in points}
    if len(dims) > 1:
        raise DimensionMismatch(f"points have mixed ambient dimensions {sorted(dims)}")
    mass = total_mass_bound(spec.coefficients)
    eval_tol = max(tol * mass / 4.0, 1e-300)
    n = len(points)
    phi0 = phi_eval(spec, 0.0, eval_tol)
    value = math.fsum(w * w * phi0 for w in weights)
    cross = []
    for i in range(n):
        for j in range(i + 1, n):
            theta = geodesic_distance(points[i], points[j])
            cross.append(2.0 * weights[i] * weights[j] * phi_eval(spec, theta, eval_tol))
    value += math.fsum(cross)
    weight_mass = math.fsum(abs(w) for w in weights)
    threshold = tol * weight_mass ** 2 * mass
    return PsdVerdict(value=value, threshold=threshold, passed=value >= -threshold)
