"""Turn preference values into permission/prohibition norms.

Two cut points split [-1, 1] into three blocks: preferences at or below
the prohibition threshold yield a prohibition norm, preferences at or
above the permission threshold yield a permission norm, and anything
strictly between them stays unregulated. The thresholds themselves can be
fixed, derived from prediction confidence, or looked up from context
variables.
"""

from __future__ import annotations

import csv
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Mapping

from .errors import InvalidConfidenceError, MissingConfidenceError
from .preference_model import ElementId, UserId
from .prediction import Prediction


class Deontic(Enum):
    PROHIBITION = "PRH"
    PERMISSION = "PER"


class NormOutcome(Enum):
    PROHIBITION = "PRH"
    PERMISSION = "PER"
    NO_NORM = "NONE"


@dataclass(frozen=True)
class Norm:
    """A single permission or prohibition over an element."""

    element: ElementId
    deontic: Deontic


@dataclass(frozen=True)
class NormDecision:
    """Outcome of applying a threshold policy to one preference value."""

    element: ElementId
    outcome: NormOutcome
    preference_used: float
    confidence_used: float | None
    thresholds_used: tuple[float, float]

    @property
    def norm(self) -> Norm | None:
        if self.outcome is NormOutcome.PROHIBITION:
            return Norm(self.element, Deontic.PROHIBITION)
        if self.outcome is NormOutcome.PERMISSION:
            return Norm(self.element, Deontic.PERMISSION)
        return None


@dataclass(frozen=True)
class HardThresholds:
    """Fixed cut points: prohibition side in [-1, 0], permission side in [0, 1]."""

    eps_prh: float
    eps_per: float

    def __post_init__(self) -> None:
        if not (-1.0 <= self.eps_prh <= 0.0):
            raise ValueError(f"prohibition threshold {self.eps_prh} outside [-1, 0]")
        if not (0.0 <= self.eps_per <= 1.0):
            raise ValueError(f"permission threshold {self.eps_per} outside [0, 1]")
        if self.eps_prh == 0.0 and self.eps_per == 0.0:
            warnings.warn(
                "degenerate thresholds (0, 0) regulate every element",
                stacklevel=3,
            )


def hard_threshold_norm(
    x: ElementId, p: float, t: HardThresholds
) -> NormDecision:
    """Three-block decision; both boundaries produce norms (inclusive)."""
    if p <= t.eps_prh:
        outcome = NormOutcome.PROHIBITION
    elif p >= t.eps_per:
        outcome = NormOutcome.PERMISSION
    else:
        outcome = NormOutcome.NO_NORM
    return NormDecision(
        element=x,
        outcome=outcome,
        preference_used=p,
        confidence_used=None,
        thresholds_used=(t.eps_prh, t.eps_per),
    )


def confident_thresholds(conf: float) -> tuple[float, float]:
    """Cut points that move toward 0 as confidence rises.

    At full confidence the norm-producing blocks are widest
    ([-1, -2/3] and [1/3, 1]); at zero confidence only the exact
    extremes -1 and 1 produce norms.
    """
    if not (0.0 <= conf <= 1.0):
        raise InvalidConfidenceError(f"confidence {conf} outside [0, 1]")
    return (-1.0 + conf / 3.0, 1.0 - 2.0 * conf / 3.0)


class ThresholdPolicy(ABC):
    """Produces the (prohibition, permission) cut points for one decision."""

    requires_confidence: bool = False

    @abstractmethod
    def thresholds(
        self,
        confidence: float | None = None,
        context_vars: Mapping[str, str] | None = None,
    ) -> tuple[float, float]: ...


class HardThresholdPolicy(ThresholdPolicy):
    """Always returns the same fixed cut points."""

    def __init__(self, t: HardThresholds):
        self._t = t

    def thresholds(self, confidence=None, context_vars=None) -> tuple[float, float]:
        return (self._t.eps_prh, self._t.eps_per)


class ConfidentThresholdPolicy(ThresholdPolicy):
    """Cut points derived from prediction confidence."""

    requires_confidence = True

    def thresholds(self, confidence=None, context_vars=None) -> tuple[float, float]:
        if confidence is None:
            raise MissingConfidenceError("confident thresholds need a confidence value")
        return confident_thresholds(confidence)


class ContextualThresholdPolicy(ThresholdPolicy):
    """Cut points looked up from context variables.

    ``table`` maps a variable name to a value-to-thresholds mapping, e.g.

        {"sensitivity": {"sensitive": (-0.1, 0.9), "normal": (-0.5, 0.5)}}

    makes prohibitions easier to trigger in sensitive contexts. Variables
    are tried in table order; the first one whose value matches wins, and
    ``default`` applies when nothing matches.
    """

    def __init__(
        self,
        table: Mapping[str, Mapping[str, tuple[float, float]]],
        default: tuple[float, float] = (-1.0, 1.0),
    ):
        self._table = {
            var: {value: self._validated(pair) for value, pair in cases.items()}
            for var, cases in table.items()
        }
        self._default = self._validated(default)

    @staticmethod
    def _validated(pair: tuple[float, float]) -> tuple[float, float]:
        prh, per = float(pair[0]), float(pair[1])
        HardThresholds(prh, per)  # range check
        return (prh, per)

    def thresholds(self, confidence=None, context_vars=None) -> tuple[float, float]:
        context_vars = context_vars or {}
        for var, cases in self._table.items():
            value = context_vars.get(var)
            if value is not None and value in cases:
                return cases[value]
        return self._default


def norm_for_value(
    element: ElementId,
    value: float,
    confidence: float | None,
    policy: ThresholdPolicy,
    context_vars: Mapping[str, str] | None = None,
) -> NormDecision:
    """Apply a threshold policy to a single preference value."""
    if policy.requires_confidence and confidence is None:
        raise MissingConfidenceError(
            f"policy {type(policy).__name__} needs a confidence for {element!r}"
        )
    prh, per = policy.thresholds(confidence, context_vars)
    decision = hard_threshold_norm(element, value, HardThresholds(prh, per))
    return NormDecision(
        element=decision.element,
        outcome=decision.outcome,
        preference_used=decision.preference_used,
        confidence_used=confidence,
        thresholds_used=decision.thresholds_used,
    )


def infer_norm(
    pred: Prediction,
    policy: ThresholdPolicy,
    context_vars: Mapping[str, str] | None = None,
) -> NormDecision:
    """Apply a threshold policy to a prediction."""
    return norm_for_value(pred.element, pred.value, pred.confidence, policy, context_vars)


class PredictionRegime(Enum):
    """Advisability of norm building given prediction accuracy and spread.

    The classification compares the average prediction distance (APD) and
    the standard deviation of those distances (PSD) against configurable
    cuts; "low" means strictly below the cut.
    """

    ANY_METHOD = "any_method"
    AVOID_HARD_THRESHOLDS = "avoid_hard_thresholds"
    DO_NOT_USE_PREDICTIONS = "do_not_use_predictions"
    FUNCTION_THRESHOLDS_PROVISIONAL = "function_thresholds_provisional"


@dataclass(frozen=True)
class RegimeThresholds:
    """Cuts separating low from high APD/PSD; not calibrated, configure per domain."""

    apd_cut: float = 0.5
    psd_cut: float = 0.5

    def __post_init__(self) -> None:
        if self.apd_cut <= 0 or self.psd_cut <= 0:
            raise ValueError("regime cuts must be positive")


def classify_regime(apd: float, psd: float, cuts: RegimeThresholds) -> PredictionRegime:
    """Quadrant classification of the prediction regime."""
    if apd < 0 or psd < 0:
        raise ValueError("apd and psd must be non-negative")
    low_apd = apd < cuts.apd_cut
    low_psd = psd < cuts.psd_cut
    if low_apd and low_psd:
        return PredictionRegime.ANY_METHOD
    if low_apd:
        return PredictionRegime.AVOID_HARD_THRESHOLDS
    if low_psd:
        return PredictionRegime.DO_NOT_USE_PREDICTIONS
    return PredictionRegime.FUNCTION_THRESHOLDS_PROVISIONAL


NORM_RECORD_FIELDS = [
    "user_id",
    "element_id",
    "outcome",
    "preference",
    "confidence",
    "prh_threshold",
    "per_threshold",
]


def write_norm_records(
    out: IO[str], user: UserId, decisions: Iterable[NormDecision]
) -> None:
    """Write one CSV line per decision, header included."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(NORM_RECORD_FIELDS)
    for d in decisions:
        writer.writerow(
            [
                user,
                d.element,
                d.outcome.value,
                repr(d.preference_used),
                "" if d.confidence_used is None else repr(d.confidence_used),
                repr(d.thresholds_used[0]),
                repr(d.thresholds_used[1]),
            ]
        )
