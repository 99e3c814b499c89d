"""Coefficient sequence models with certified tail bounds.

A model represents a nonnegative summable sequence a_0, a_1, ... given
either term by term (``Finite``) or as a parametric family.  Tail bounds
returned here are certified over-estimates of the weighted tails

    sum_{m >= M} a_m * m**ell

never asymptotic estimates, so truncation points derived from them are
safe for downstream reconstruction guarantees.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

from .errors import DivergentSeries, ToleranceUnreachable

# Indices above this are never searched; parametric tails shrink far faster.
_SEARCH_CAP = 1 << 26


@dataclass(frozen=True)
class Finite:
    """a_m = terms[m] for m < len(terms), 0 beyond."""

    terms: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(float(t) for t in self.terms))
        if any(t < 0.0 for t in self.terms):
            raise ValueError("finite sequence terms must be nonnegative")


@dataclass(frozen=True)
class Geometric:
    """a_m = c * r**m with c >= 0 and 0 <= r < 1."""

    c: float
    r: float

    def __post_init__(self):
        if self.c < 0.0:
            raise ValueError(f"scale must be nonnegative, got {self.c}")
        if not 0.0 <= self.r < 1.0:
            raise ValueError(f"ratio must lie in [0, 1), got {self.r}")


@dataclass(frozen=True)
class PowerLaw:
    """a_m = C * (m+1)**(-p) with C >= 0 and p > 1 (offset keeps a_0 finite)."""

    C: float
    p: float

    def __post_init__(self):
        if self.C < 0.0:
            raise ValueError(f"scale must be nonnegative, got {self.C}")
        if not self.p > 1.0:
            raise ValueError(f"exponent must exceed 1 for summability, got {self.p}")


@dataclass(frozen=True)
class PoissonType:
    """a_m = exp(-c) * c**m / m! with intensity c >= 0."""

    c: float

    def __post_init__(self):
        if self.c < 0.0:
            raise ValueError(f"intensity must be nonnegative, got {self.c}")


SequenceModel = Union[Finite, Geometric, PowerLaw, PoissonType]


@dataclass(frozen=True)
class TailBound:
    """Certified upper bound on sum_{m >= start_index} a_m * m**weight_power."""

    start_index: int
    weight_power: int
    bound: float


def term(model: SequenceModel, m: int) -> float:
    """Coefficient a_m of the model."""
    if m < 0:
        raise ValueError(f"index must be nonnegative, got {m}")
    if isinstance(model, Finite):
        return model.terms[m] if m < len(model.terms) else 0.0
    if isinstance(model, Geometric):
        return model.c * model.r ** m
    if isinstance(model, PowerLaw):
        return model.C * float(m + 1) ** (-model.p)
    if isinstance(model, PoissonType):
        c = model.c
        if c == 0.0:
            return 1.0 if m == 0 else 0.0
        if m <= 64:
            return math.exp(-c) * c ** m / math.factorial(m)
        # log-domain form avoids overflow in c**m for large m
        return math.exp(-c + m * math.log(c) - math.lgamma(m + 1))
    raise TypeError(f"not a sequence model: {model!r}")


def converges_weighted(model: SequenceModel, ell: int) -> bool:
    """Whether sum_m a_m * m**ell is finite, decided analytically per variant."""
    if ell < 0:
        raise ValueError(f"weight power must be nonnegative, got {ell}")
    if isinstance(model, (Finite, Geometric, PoissonType)):
        return True
    if isinstance(model, PowerLaw):
        return model.C == 0.0 or ell < model.p - 1.0
    raise TypeError(f"not a sequence model: {model!r}")


def _weighted_term(model: SequenceModel, m: int, ell: int) -> float:
    # convention 0**0 = 1, so the m=0 term survives only at ell = 0
    return term(model, m) * float(m ** ell)


def weighted_tail_bound(model: SequenceModel, start: int, ell: int) -> TailBound:
    """Certify an upper bound on sum_{m >= start} a_m * m**ell.

    Geometric and Poisson tails are capped by summing exact terms up to
    an index where the term ratio is provably below 1, then closing with
    a geometric series; power-law tails use the integral test.  Raises
    DivergentSeries when no finite bound exists.
    """
    if start < 0:
        raise ValueError(f"start index must be nonnegative, got {start}")
    if not converges_weighted(model, ell):
        raise DivergentSeries(
            f"sum of a_m * m^{ell} diverges for {model!r}; no truncation is valid"
        )
    return TailBound(start, ell, _tail_bound_value(model, start, ell))


def _tail_bound_value(model: SequenceModel, start: int, ell: int) -> float:
    if isinstance(model, Finite):
        return math.fsum(
            _weighted_term(model, m, ell) for m in range(start, len(model.terms))
        )

    if isinstance(model, Geometric):
        c, r = model.c, model.r
        if c == 0.0:
            return 0.0
        if r == 0.0:
            return c if (start == 0 and ell == 0) else 0.0
        if ell == 0:
            return c * r ** start / (1.0 - r)
        # Beyond m0 the term ratio r*((m+1)/m)**ell stays below 2r/(1+r) < 1.
        rho = (1.0 + r) / 2.0
        m0 = max(start, 1, math.ceil(ell / math.log(1.0 / rho)))
        head = math.fsum(_weighted_term(model, m, ell) for m in range(max(start, 1), m0))
        q = r * ((m0 + 1.0) / m0) ** ell
        return head + _weighted_term(model, m0, ell) / (1.0 - q)

    if isinstance(model, PowerLaw):
        if model.C == 0.0:
            return 0.0
        # m**ell <= (m+1)**ell, then integral test on sum n**(ell - p)
        s = model.p - ell
        n0 = float(start + 1)
        return model.C * (n0 ** -s + n0 ** (1.0 - s) / (s - 1.0))

    if isinstance(model, PoissonType):
        c = model.c
        if c == 0.0:
            return 1.0 if (start == 0 and ell == 0) else 0.0
        m0 = max(start, 1, math.ceil(2.0 * c) + ell)
        while c / (m0 + 1.0) * (1.0 + 1.0 / m0) ** ell > 0.5:
            m0 += 1
        head_start = start if ell == 0 else max(start, 1)
        head = math.fsum(_weighted_term(model, m, ell) for m in range(head_start, m0))
        q = c / (m0 + 1.0) * (1.0 + 1.0 / m0) ** ell
        return head + _weighted_term(model, m0, ell) / (1.0 - q)

    raise TypeError(f"not a sequence model: {model!r}")


def total_mass_bound(model: SequenceModel) -> float:
    """Certified upper bound on sum_m a_m."""
    return weighted_tail_bound(model, 0, 0).bound


def truncation_index(model: SequenceModel, ell: int, tol: float) -> int:
    """Smallest start index whose certified weighted tail is at most tol."""
    if tol <= 0.0:
        raise ToleranceUnreachable(f"tolerance must be positive, got {tol}")
    if weighted_tail_bound(model, 0, ell).bound <= tol:
        return 0
    hi = 1
    while weighted_tail_bound(model, hi, ell).bound > tol:
        hi *= 2
        if hi > _SEARCH_CAP:
            raise ToleranceUnreachable(
                f"no index below {_SEARCH_CAP} certifies tail <= {tol} for {model!r}"
            )
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if weighted_tail_bound(model, mid, ell).bound <= tol:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# JSON encoding, consumed by the CLI


def model_to_dict(model: SequenceModel) -> dict:
    if isinstance(model, Finite):
        return {"variant": "finite", "terms": list(model.terms)}
    if isinstance(model, Geometric):
        return {"variant": "geometric", "c": model.c, "r": model.r}
    if isinstance(model, PowerLaw):
        return {"variant": "powerlaw", "C": model.C, "p": model.p}
    if isinstance(model, PoissonType):
        return {"variant": "poisson", "c": model.c}
    raise TypeError(f"not a sequence model: {model!r}")


def model_from_dict(data: dict) -> SequenceModel:
    if not isinstance(data, dict) or "variant" not in data:
        raise ValueError("sequence model JSON must be an object with a 'variant' key")
    variant = data["variant"]
    try:
        if variant == "finite":
            return Finite(tuple(data["terms"]))
        if variant == "geometric":
            return Geometric(float(data["c"]), float(data["r"]))
        if variant == "powerlaw":
            return PowerLaw(float(data["C"]), float(data["p"]))
        if variant == "poisson":
            return PoissonType(float(data["c"]))
    except KeyError as exc:
        raise ValueError(f"model variant '{variant}' is missing field {exc}") from exc
    raise ValueError(f"unknown sequence model variant '{variant}'")


def model_from_json(text: str) -> SequenceModel:
    return model_from_dict(json.loads(text))
