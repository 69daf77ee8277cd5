"""Predict unknown preferences from similar users and complete profiles."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Protocol

from .confidence import ConfidenceParams, rho_mu_confidence
from .errors import NoSimilarUsersError
from .preference_model import (
    CompletedProfile,
    ElementId,
    PreferenceMatrix,
    Provenance,
    UserId,
)
from .separation import SeparationMeasure
from .similarity import SimilarityParams, SimilarSet, similar_users


class FallbackPolicy(Enum):
    """What to do with an unknown entry when no neighbors can be found.

    SKIP leaves the entry unknown (and downstream emits no norm for it),
    NEUTRAL fills it with 0, ELEMENT_MEAN uses the mean known preference
    of the element across the whole matrix.
    """

    SKIP = "skip"
    NEUTRAL = "neutral"
    ELEMENT_MEAN = "element_mean"


@dataclass
class Prediction:
    """A predicted preference with its provenance."""

    user: UserId
    element: ElementId
    value: float
    neighbors: SimilarSet | None = None
    confidence: float | None = None


class Predictor(Protocol):
    def __call__(self, m: PreferenceMatrix, u: UserId, x: ElementId) -> Prediction: ...


def predict_average(m: PreferenceMatrix, s: SimilarSet) -> Prediction:
    """Arithmetic mean of the neighbors' preferences on the query element.

    ``m`` must hold a known value on the query element for every member.
    """
    if not s.members:
        raise NoSimilarUsersError(f"empty neighbor set for ({s.user!r}, {s.element!r})")
    total = 0.0
    for uid, _ in s.members:
        value = m.get(uid, s.element)
        if value is None:
            raise ValueError(
                f"neighbor {uid!r} has no known preference on {s.element!r}"
            )
        total += value
    return Prediction(user=s.user, element=s.element, value=total / len(s.members), neighbors=s)


def make_average_predictor(
    sep: SeparationMeasure,
    params: SimilarityParams,
    *,
    knowledge: PreferenceMatrix | None = None,
    conf_params: ConfidenceParams | None = None,
) -> Predictor:
    """Build a predictor that averages the preferences of similar users.

    When ``conf_params`` is given, each prediction also carries its
    confidence. ``knowledge`` optionally separates the candidate pool from
    the matrix used to measure separations (see ``similar_users``).
    """

    def predictor(m: PreferenceMatrix, u: UserId, x: ElementId) -> Prediction:
        pool = m if knowledge is None else knowledge
        s = similar_users(m, sep, u, x, params, knowledge=knowledge)
        pred = predict_average(pool, s)
        if conf_params is not None:
            sample = [pool.get(uid, x) for uid, _ in s.members]
            pred.confidence = rho_mu_confidence(s, sample, conf_params)
        return pred

    return predictor


def fallback_value(
    m: PreferenceMatrix, x: ElementId, fallback: FallbackPolicy
) -> float | None:
    """Value used for an unpredictable entry; None means leave it unknown."""
    if fallback is FallbackPolicy.NEUTRAL:
        return 0.0
    if fallback is FallbackPolicy.ELEMENT_MEAN:
        column = m.column(x)
        if not column:
            return None
        return sum(column.values()) / len(column)
    return None


def complete_profile(
    m: PreferenceMatrix,
    u: UserId,
    predictor: Predictor,
    fallback: FallbackPolicy = FallbackPolicy.SKIP,
) -> CompletedProfile:
    """Fill a user's unknown preferences via the predictor.

    Known entries are copied verbatim. Entries the predictor cannot serve
    are resolved by the fallback policy; under SKIP they stay absent from
    the returned profile.
    """
    profile = CompletedProfile(user=u)
    row = m.row(u)
    for x in m.elements:
        known_value = row.get(x)
        if known_value is not None:
            profile.values[x] = known_value
            profile.provenance[x] = Provenance.KNOWN
            continue
        try:
            pred = predictor(m, u, x)
            value: float | None = pred.value
        except NoSimilarUsersError:
            value = fallback_value(m, x, fallback)
        if value is not None:
            profile.values[x] = value
            profile.provenance[x] = Provenance.PREDICTED
    return profile
