"""Prediction confidence from neighbor separation and neighbor agreement.

Confidence is 1 minus a weighted sum of two capped terms: the mean
separation between the query user and the neighbors, and the standard
deviation of the neighbors' preferences toward the query element. Both
terms are clamped to 1 before weighting so the result stays in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, TYPE_CHECKING

from .errors import EmptySampleError, NoSimilarUsersError

if TYPE_CHECKING:
    from .similarity import SimilarSet

# The preferences of the selected neighbors toward the query element.
NeighborPreferenceSample = Sequence[float]


@dataclass(frozen=True)
class ConfidenceParams:
    """Weights for the two confidence terms; they must sum to 1.

    rho weighs the mean neighbor separation, mu the spread of the
    neighbors' preferences.
    """

    rho: float = 0.5
    mu: float = 0.5

    def __post_init__(self) -> None:
        if not (0.0 <= self.rho <= 1.0) or not (0.0 <= self.mu <= 1.0):
            raise ValueError(f"rho and mu must lie in [0, 1], got ({self.rho}, {self.mu})")
        if abs(self.rho + self.mu - 1.0) > 1e-9:
            raise ValueError(f"rho + mu must equal 1, got {self.rho + self.mu}")


def sample_sd(values: NeighborPreferenceSample) -> float:
    """Population standard deviation; a singleton has spread 0."""
    if len(values) == 0:
        raise EmptySampleError("standard deviation of an empty sample")
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def confidence_from_stats(
    mean_separation: float, spread: float, params: ConfidenceParams
) -> float:
    """Confidence from precomputed neighbor statistics."""
    return 1.0 - params.rho * min(mean_separation, 1.0) - params.mu * min(spread, 1.0)


def rho_mu_confidence(
    s: "SimilarSet",
    sample: NeighborPreferenceSample,
    params: ConfidenceParams,
) -> float:
    """Confidence of the prediction built from the given neighbor set.

    ``sample`` must be the neighbors' preferences toward the query
    element, one per member of ``s``.
    """
    if len(s.members) == 0:
        raise NoSimilarUsersError(
            f"cannot compute confidence for ({s.user!r}, {s.element!r}) without neighbors"
        )
    return confidence_from_stats(s.mean_separation(), sample_sd(sample), params)
