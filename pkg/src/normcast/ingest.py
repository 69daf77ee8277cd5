"""Load preference data into a matrix and generate synthetic cohorts.

The one ingestion format is a UTF-8 CSV with header
``user_id,element_id,answer``. Answers may arrive on an arbitrary linear
scale (e.g. a 1-to-5 survey scale) and are mapped onto [-1, 1].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DuplicateEntryError,
    InvalidSpecError,
    OutOfScaleError,
    ParseError,
)
from .preference_model import PreferenceMatrix

CSV_FIELDS = ["user_id", "element_id", "answer"]


@dataclass(frozen=True)
class RawResponse:
    """One survey answer before rescaling."""

    user_id: str
    element_id: str
    answer: float


def rescale_likert(answer: float, lo: float, hi: float) -> float:
    """Map an answer on [lo, hi] linearly onto [-1, 1]."""
    if not lo < hi:
        raise ValueError(f"scale bounds must satisfy lo < hi, got ({lo}, {hi})")
    if not (lo <= answer <= hi):
        raise OutOfScaleError(f"answer {answer} outside scale [{lo}, {hi}]")
    return -1.0 + 2.0 * (answer - lo) / (hi - lo)


def to_scale(value: float, lo: float, hi: float) -> float:
    """Inverse of rescale_likert: map a [-1, 1] value back onto [lo, hi]."""
    if not lo < hi:
        raise ValueError(f"scale bounds must satisfy lo < hi, got ({lo}, {hi})")
    return lo + (value + 1.0) * (hi - lo) / 2.0


def load_csv(path: str | Path, scale: tuple[float, float] | None = None) -> PreferenceMatrix:
    """Read a preference matrix from CSV.

    With ``scale=(lo, hi)`` the answers are rescaled into [-1, 1];
    without it they must already lie in [-1, 1].

    Raises:
        ParseError: missing/extra columns or a non-numeric answer.
        DuplicateEntryError: the same (user, element) pair twice.
        OutOfScaleError: an answer outside the declared scale.
    """
    matrix = PreferenceMatrix()
    with open(path, newline="", encoding="utf-8-sig") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file, expected a header row", line=1) from None
        if header != CSV_FIELDS:
            raise ParseError(
                f"expected header {','.join(CSV_FIELDS)!r}, got {','.join(header)!r}",
                line=1,
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", line=lineno)
            user_id, element_id, raw = row
            if not user_id or not element_id:
                raise ParseError("empty user or element id", line=lineno)
            try:
                answer = float(raw)
            except ValueError:
                raise ParseError(f"non-numeric answer {raw!r}", line=lineno) from None
            if matrix.has_user(user_id) and matrix.has_element(element_id):
                if matrix.get(user_id, element_id) is not None:
                    raise DuplicateEntryError(
                        f"line {lineno}: duplicate entry ({user_id!r}, {element_id!r})"
                    )
            if scale is not None:
                value = rescale_likert(answer, scale[0], scale[1])
            else:
                if not (-1.0 <= answer <= 1.0):
                    raise OutOfScaleError(
                        f"line {lineno}: value {answer} outside [-1, 1] and no scale given"
                    )
                value = answer
            matrix.set(user_id, element_id, value)
    return matrix


def dump_csv(m: PreferenceMatrix, path: str | Path) -> None:
    """Write the matrix in the ingestion schema with values in [-1, 1].

    Rows follow the matrix's deterministic iteration order, and values are
    written with full round-trip precision, so dump/load is an identity.
    """
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for user_id in m.users:
            row = m.row(user_id)
            for element_id, value in row.items():
                writer.writerow([user_id, element_id, repr(value)])


@dataclass(frozen=True)
class SyntheticCohortSpec:
    """Parameters for a clustered synthetic cohort.

    Users are split round-robin into clusters; each cluster has a prototype
    preference vector and each user's true preference is the prototype plus
    Gaussian noise, clipped to [-1, 1]. The observed matrix keeps each true
    entry with probability ``known_fraction``. ``prototypes`` overrides the
    randomly drawn cluster prototypes when given.
    """

    num_users: int
    num_elements: int
    num_clusters: int
    known_fraction: float
    noise_sd: float
    seed: int
    prototypes: Sequence[Sequence[float]] | None = None

    def __post_init__(self) -> None:
        if self.num_users < 1 or self.num_elements < 1 or self.num_clusters < 1:
            raise InvalidSpecError("cohort sizes must be positive")
        if self.num_clusters > self.num_users:
            raise InvalidSpecError(
                f"{self.num_clusters} clusters for {self.num_users} users"
            )
        if not (0.0 < self.known_fraction <= 1.0):
            raise InvalidSpecError(f"known_fraction {self.known_fraction} outside (0, 1]")
        if self.noise_sd < 0:
            raise InvalidSpecError(f"noise_sd {self.noise_sd} must be >= 0")
        if self.prototypes is not None:
            if len(self.prototypes) != self.num_clusters:
                raise InvalidSpecError(
                    f"expected {self.num_clusters} prototypes, got {len(self.prototypes)}"
                )
            for proto in self.prototypes:
                if len(proto) != self.num_elements:
                    raise InvalidSpecError("prototype length must equal num_elements")
                if any(not (-1.0 <= v <= 1.0) for v in proto):
                    raise InvalidSpecError("prototype values must lie in [-1, 1]")


def generate_synthetic(
    spec: SyntheticCohortSpec,
) -> tuple[PreferenceMatrix, PreferenceMatrix]:
    """Generate (ground_truth, observed) matrices, deterministic per seed."""
    rng = np.random.default_rng(spec.seed)
    if spec.prototypes is not None:
        prototypes = np.asarray(spec.prototypes, dtype=np.float64)
    else:
        prototypes = rng.uniform(-1.0, 1.0, size=(spec.num_clusters, spec.num_elements))
    noise = rng.normal(0.0, spec.noise_sd, size=(spec.num_users, spec.num_elements))
    keep = rng.random(size=(spec.num_users, spec.num_elements)) < spec.known_fraction

    user_ids = [f"u{i:04d}" for i in range(spec.num_users)]
    element_ids = [f"x{j:03d}" for j in range(spec.num_elements)]

    ground = PreferenceMatrix()
    observed = PreferenceMatrix()
    for ids, m in ((user_ids, ground), (user_ids, observed)):
        for uid in ids:
            m.add_user(uid)
        for xid in element_ids:
            m.add_element(xid)

    for i, uid in enumerate(user_ids):
        cluster = i % spec.num_clusters
        true_row = np.clip(prototypes[cluster] + noise[i], -1.0, 1.0)
        for j, xid in enumerate(element_ids):
            value = float(true_row[j])
            ground.set(uid, xid, value)
            if keep[i, j]:
                observed.set(uid, xid, value)
    return ground, observed
