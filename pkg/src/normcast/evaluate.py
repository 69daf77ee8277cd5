"""Hold-out evaluation of the preference predictor.

The protocol: a fraction of users become test users and leave the
knowledge pool; a fraction of each test user's answers is masked and must
be predicted; similarity between users is assessed on a reduced random
subset of everyone's remaining answers, while the neighbors' actual
answers come from the pool. Reported distances are |predicted - actual|
on the configured answer scale, so results from rescaled survey data read
in the survey's own units.

Everything is driven by one integer seed: splits, masks, similarity
subsets and the random baseline are all reproducible, and two runs with
the same configuration produce byte-identical reports.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .confidence import ConfidenceParams, confidence_from_stats, sample_sd
from .errors import (
    InvalidSplitError,
    NoSimilarUsersError,
    ParseError,
    UndefinedCorrelationError,
)
from .ingest import to_scale
from .preference_model import ElementId, PreferenceMatrix, UserId
from .prediction import predict_average
from .separation import get_separation_measure
from .similarity import SimilarityParams, similar_users

REPORT_MAGIC = "normcast-report-v1"

PREDICTION_FIELDS = [
    "user_id",
    "element_id",
    "predicted",
    "actual",
    "distance",
    "confidence",
    "mean_separation",
    "sample_sd",
]


@dataclass(frozen=True)
class Regular:
    """Test users drawn uniformly at random."""


@dataclass(frozen=True)
class Medium:
    """Test users drawn only from users whose answer spread is at least min_sd.

    min_sd is interpreted on the configured answer scale.
    """

    min_sd: float = 1.0


@dataclass(frozen=True)
class Hard:
    """The top_k users with the highest answer spread all become test users."""

    top_k: int = 100


Hardness = Regular | Medium | Hard


class BaselineKind(Enum):
    RANDOM = "random"
    ELEMENT_MEAN = "element_mean"


@dataclass(frozen=True)
class ExperimentConfig:
    test_user_fraction: float = 0.20
    test_answer_fraction: float = 0.20
    similarity_answer_fraction: float = 0.40
    hardness: Hardness = Regular()
    similarity: SimilarityParams = SimilarityParams()
    confidence: ConfidenceParams = ConfidenceParams()
    separation: str = "cumulative"
    seed: int = 0
    scale: tuple[float, float] = (-1.0, 1.0)
    histogram_bin_width: float = 0.25

    def __post_init__(self) -> None:
        for name in ("test_user_fraction", "test_answer_fraction", "similarity_answer_fraction"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if not self.scale[0] < self.scale[1]:
            raise ValueError(f"scale bounds must satisfy lo < hi, got {self.scale}")
        if self.histogram_bin_width <= 0:
            raise ValueError("histogram_bin_width must be positive")


@dataclass
class PredictionRecord:
    """One evaluated target; values on the configured answer scale.

    mean_separation and sample_sd keep the raw (uncapped) neighbor
    statistics so confidence can be recomputed for any weight pair.
    """

    user: UserId
    element: ElementId
    predicted: float
    actual: float
    distance: float
    confidence: float | None = None
    mean_separation: float | None = None
    sample_sd: float | None = None


@dataclass
class ExperimentReport:
    kind: str
    n_targets: int
    n_predictions: int
    coverage: float
    mean_distance: float
    sd_distance: float
    histogram: list[tuple[float, float, int]] = field(default_factory=list)
    per_prediction: list[PredictionRecord] = field(default_factory=list)
    meta: dict[str, str] = field(default_factory=dict)

    def save(self, path: str | Path) -> None:
        out = io.StringIO()
        out.write(REPORT_MAGIC + "\n")
        out.write(f"kind: {self.kind}\n")
        for key, value in self.meta.items():
            out.write(f"{key}: {value}\n")
        out.write(f"n_targets: {self.n_targets}\n")
        out.write(f"n_predictions: {self.n_predictions}\n")
        out.write(f"coverage: {self.coverage!r}\n")
        out.write(f"mean_distance: {self.mean_distance!r}\n")
        out.write(f"sd_distance: {self.sd_distance!r}\n")
        out.write("\n[predictions]\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(PREDICTION_FIELDS)
        for r in self.per_prediction:
            writer.writerow(
                [
                    r.user,
                    r.element,
                    repr(r.predicted),
                    repr(r.actual),
                    repr(r.distance),
                    "" if r.confidence is None else repr(r.confidence),
                    "" if r.mean_separation is None else repr(r.mean_separation),
                    "" if r.sample_sd is None else repr(r.sample_sd),
                ]
            )
        out.write("\n[histogram]\n")
        writer.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, count in self.histogram:
            writer.writerow([repr(lo), repr(hi), count])
        Path(path).write_text(out.getvalue(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentReport":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or lines[0] != REPORT_MAGIC:
            raise ParseError(f"{path} is not a {REPORT_MAGIC} file", line=1)
        header: dict[str, str] = {}
        i = 1
        while i < len(lines) and lines[i]:
            key, _, value = lines[i].partition(": ")
            header[key] = value
            i += 1
        try:
            report = cls(
                kind=header.pop("kind"),
                n_targets=int(header.pop("n_targets")),
                n_predictions=int(header.pop("n_predictions")),
                coverage=float(header.pop("coverage")),
                mean_distance=float(header.pop("mean_distance")),
                sd_distance=float(header.pop("sd_distance")),
            )
        except KeyError as exc:
            raise ParseError(f"report header misses {exc}") from None
        report.meta = header

        def opt(fragment: str) -> float | None:
            return None if fragment == "" else float(fragment)

        section = None
        skip_header = False
        for line in lines[i:]:
            if not line:
                continue
            if line.startswith("["):
                section = line
                skip_header = True
                continue
            if skip_header:
                skip_header = False
                continue
            (parts,) = csv.reader([line])
            if section == "[predictions]":
                report.per_prediction.append(
                    PredictionRecord(
                        user=parts[0],
                        element=parts[1],
                        predicted=float(parts[2]),
                        actual=float(parts[3]),
                        distance=float(parts[4]),
                        confidence=opt(parts[5]),
                        mean_separation=opt(parts[6]),
                        sample_sd=opt(parts[7]),
                    )
                )
            elif section == "[histogram]":
                report.histogram.append((float(parts[0]), float(parts[1]), int(parts[2])))
        return report


@dataclass
class ExperimentSplit:
    """Derived matrices and target lists for one seeded run.

    Masked answers exist only in ``ground``; the observed, knowledge and
    similarity matrices are built without them, so they can never leak
    into separation or prediction.
    """

    test_users: list[UserId]
    pool_users: list[UserId]
    targets: dict[UserId, list[ElementId]]
    observed: PreferenceMatrix
    knowledge: PreferenceMatrix
    similarity_matrix: PreferenceMatrix


def _scale_value(value: float, scale: tuple[float, float]) -> float:
    if scale == (-1.0, 1.0):
        return value
    return to_scale(value, scale[0], scale[1])


def _user_answer_sd(ground: PreferenceMatrix, u: UserId, scale: tuple[float, float]) -> float:
    values = [_scale_value(v, scale) for v in ground.row(u).values()]
    if not values:
        return 0.0
    return sample_sd(values)


def _count(fraction: float, n: int) -> int:
    return max(1, round(fraction * n)) if n > 0 else 0


def prepare_experiment(ground: PreferenceMatrix, cfg: ExperimentConfig) -> ExperimentSplit:
    """Split users, mask test answers and draw the similarity subsets."""
    rng = random.Random(cfg.seed)
    users = ground.users
    if len(users) < 2:
        raise InvalidSplitError("need at least two users")

    if isinstance(cfg.hardness, Hard):
        ranked = sorted(
            users, key=lambda u: (-_user_answer_sd(ground, u, cfg.scale), u)
        )
        if cfg.hardness.top_k >= len(users):
            raise InvalidSplitError(
                f"top_k={cfg.hardness.top_k} leaves no pool among {len(users)} users"
            )
        test_users = ranked[: cfg.hardness.top_k]
    else:
        n_test = _count(cfg.test_user_fraction, len(users))
        if n_test >= len(users):
            raise InvalidSplitError("test fraction leaves no pool users")
        if isinstance(cfg.hardness, Medium):
            eligible = [
                u for u in users if _user_answer_sd(ground, u, cfg.scale) >= cfg.hardness.min_sd
            ]
            if len(eligible) < n_test:
                raise InvalidSplitError(
                    f"only {len(eligible)} users reach min_sd={cfg.hardness.min_sd}, "
                    f"need {n_test} test users"
                )
            test_users = rng.sample(eligible, n_test)
        else:
            test_users = rng.sample(users, n_test)

    test_set = set(test_users)
    pool_users = [u for u in users if u not in test_set]

    targets: dict[UserId, list[ElementId]] = {}
    for u in sorted(test_users):
        known = ground.known_elements(u)
        if not known:
            targets[u] = []
            continue
        targets[u] = rng.sample(known, _count(cfg.test_answer_fraction, len(known)))
    if sum(len(xs) for xs in targets.values()) == 0:
        raise InvalidSplitError("no test answers available to mask")

    masked = {u: set(xs) for u, xs in targets.items()}
    elements = ground.elements

    observed = PreferenceMatrix()
    knowledge = PreferenceMatrix()
    similarity_matrix = PreferenceMatrix()
    for m in (observed, knowledge, similarity_matrix):
        for x in elements:
            m.add_element(x)
    for u in users:
        observed.add_user(u)
        similarity_matrix.add_user(u)
        hidden = masked.get(u, ())
        for x, value in ground.row(u).items():
            if x not in hidden:
                observed.set(u, x, value)
    for u in pool_users:
        knowledge.add_user(u)
        for x, value in observed.row(u).items():
            knowledge.set(u, x, value)

    for u in users:
        visible = observed.known_elements(u)
        if not visible:
            continue
        for x in rng.sample(visible, _count(cfg.similarity_answer_fraction, len(visible))):
            similarity_matrix.set(u, x, observed.get(u, x))

    return ExperimentSplit(
        test_users=test_users,
        pool_users=pool_users,
        targets=targets,
        observed=observed,
        knowledge=knowledge,
        similarity_matrix=similarity_matrix,
    )


def _config_meta(cfg: ExperimentConfig) -> dict[str, str]:
    meta = {}
    if isinstance(cfg.hardness, Regular):
        meta["hardness"] = "regular"
    elif isinstance(cfg.hardness, Medium):
        meta["hardness"] = "medium"
        meta["min_sd"] = repr(cfg.hardness.min_sd)
    else:
        meta["hardness"] = "hard"
        meta["top_k"] = repr(cfg.hardness.top_k)
    meta["seed"] = repr(cfg.seed)
    meta["scale"] = f"{cfg.scale[0]!r}:{cfg.scale[1]!r}"
    meta["test_user_fraction"] = repr(cfg.test_user_fraction)
    meta["test_answer_fraction"] = repr(cfg.test_answer_fraction)
    meta["similarity_answer_fraction"] = repr(cfg.similarity_answer_fraction)
    meta["separation"] = cfg.separation
    meta["epsilon"] = repr(cfg.similarity.epsilon)
    meta["nu"] = repr(cfg.similarity.nu)
    meta["min_common"] = repr(cfg.similarity.min_common)
    meta["rho"] = repr(cfg.confidence.rho)
    meta["mu"] = repr(cfg.confidence.mu)
    meta["histogram_bin_width"] = repr(cfg.histogram_bin_width)
    return meta


def _histogram(distances: Sequence[float], width: float) -> list[tuple[float, float, int]]:
    if not distances:
        return []
    max_d = max(distances)
    n_bins = max(1, math.ceil(max_d / width)) if max_d > 0 else 1
    counts = [0] * n_bins
    for d in distances:
        counts[min(int(d // width), n_bins - 1)] += 1
    return [(i * width, (i + 1) * width, counts[i]) for i in range(n_bins)]


def _summarize(
    kind: str,
    cfg: ExperimentConfig,
    n_targets: int,
    records: list[PredictionRecord],
) -> ExperimentReport:
    distances = [r.distance for r in records]
    if distances:
        mean = sum(distances) / len(distances)
        sd = math.sqrt(sum((d - mean) ** 2 for d in distances) / len(distances))
    else:
        mean = math.nan
        sd = math.nan
    return ExperimentReport(
        kind=kind,
        n_targets=n_targets,
        n_predictions=len(records),
        coverage=len(records) / n_targets,
        mean_distance=mean,
        sd_distance=sd,
        histogram=_histogram(distances, cfg.histogram_bin_width),
        per_prediction=records,
        meta=_config_meta(cfg),
    )


def _iter_targets(split: ExperimentSplit):
    for u in sorted(split.targets):
        for x in sorted(split.targets[u]):
            yield u, x


def run_experiment(ground: PreferenceMatrix, cfg: ExperimentConfig) -> ExperimentReport:
    """Evaluate the similarity-based predictor on masked answers."""
    split = prepare_experiment(ground, cfg)
    sep = get_separation_measure(cfg.separation)
    records: list[PredictionRecord] = []
    n_targets = 0
    for u, x in _iter_targets(split):
        n_targets += 1
        try:
            s = similar_users(
                split.similarity_matrix, sep, u, x, cfg.similarity, knowledge=split.knowledge
            )
        except NoSimilarUsersError:
            continue
        pred = predict_average(split.knowledge, s)
        sample = [split.knowledge.get(uid, x) for uid, _ in s.members]
        mean_sep = s.mean_separation()
        spread = sample_sd(sample)
        predicted = _scale_value(pred.value, cfg.scale)
        actual = _scale_value(ground.get(u, x), cfg.scale)
        records.append(
            PredictionRecord(
                user=u,
                element=x,
                predicted=predicted,
                actual=actual,
                distance=abs(predicted - actual),
                confidence=confidence_from_stats(mean_sep, spread, cfg.confidence),
                mean_separation=mean_sep,
                sample_sd=spread,
            )
        )
    return _summarize("predictor", cfg, n_targets, records)


def run_baseline(
    ground: PreferenceMatrix, cfg: ExperimentConfig, kind: BaselineKind
) -> ExperimentReport:
    """Evaluate a reference predictor on the exact same split as run_experiment."""
    split = prepare_experiment(ground, cfg)
    rng = random.Random(f"{cfg.seed}/baseline:{kind.value}")
    lo, hi = cfg.scale
    element_means: dict[ElementId, float] = {}
    if kind is BaselineKind.ELEMENT_MEAN:
        for x in split.knowledge.elements:
            column = split.knowledge.column(x)
            if column:
                element_means[x] = sum(column.values()) / len(column)
    records: list[PredictionRecord] = []
    n_targets = 0
    for u, x in _iter_targets(split):
        n_targets += 1
        if kind is BaselineKind.RANDOM:
            predicted = rng.uniform(lo, hi)
        else:
            mean_value = element_means.get(x)
            if mean_value is None:
                continue  # element unseen in the pool: uncovered
            predicted = _scale_value(mean_value, cfg.scale)
        actual = _scale_value(ground.get(u, x), cfg.scale)
        records.append(
            PredictionRecord(
                user=u,
                element=x,
                predicted=predicted,
                actual=actual,
                distance=abs(predicted - actual),
            )
        )
    return _summarize(f"baseline:{kind.value}", cfg, n_targets, records)


def _average_ranks(values: Sequence[float]) -> np.ndarray:
    a = np.asarray(values, dtype=np.float64)
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(len(a), dtype=np.float64)
    i = 0
    while i < len(a):
        j = i
        while j + 1 < len(a) and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Rank correlation with average ranks for ties."""
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise UndefinedCorrelationError("need at least two points")
    rx = _average_ranks(xs)
    ry = _average_ranks(ys)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    denom = math.sqrt(float(np.sum(rx * rx)) * float(np.sum(ry * ry)))
    if denom == 0.0:
        raise UndefinedCorrelationError("constant input vector")
    return float(np.sum(rx * ry) / denom)


class TuneResult(NamedTuple):
    rho: float
    mu: float
    corr: float


def tune_confidence(report: ExperimentReport, grid_step: float = 0.01) -> TuneResult:
    """Grid-search the confidence weights that correlate best with quality.

    Confidence is recomputed per grid point from the stored neighbor
    statistics and correlated (Spearman) with the prediction distances;
    the most negative correlation wins. Grid points where confidence is
    constant are skipped.
    """
    if not (0.0 < grid_step <= 1.0):
        raise ValueError(f"grid_step must lie in (0, 1], got {grid_step}")
    records = report.per_prediction
    if any(r.mean_separation is None or r.sample_sd is None for r in records):
        raise ValueError("report lacks neighbor statistics; re-run the predictor evaluation")
    if len(records) < 2:
        raise UndefinedCorrelationError("need at least two predictions to tune")
    distances = [r.distance for r in records]
    steps = round(1.0 / grid_step)
    best: TuneResult | None = None
    for i in range(steps + 1):
        params = ConfidenceParams(rho=i / steps, mu=(steps - i) / steps)
        confs = [
            confidence_from_stats(r.mean_separation, r.sample_sd, params) for r in records
        ]
        try:
            corr = spearman(confs, distances)
        except UndefinedCorrelationError:
            continue
        if best is None or corr < best.corr:
            best = TuneResult(params.rho, params.mu, corr)
    if best is None:
        raise UndefinedCorrelationError("confidence is constant at every grid point")
    return best
