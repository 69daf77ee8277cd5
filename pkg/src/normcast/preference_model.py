"""Sparse preference storage and completed user profiles.

Preferences are reals in [-1, 1]: 1 is full approval of an element, -1 full
disapproval, 0 neutrality. A preference an agent has not observed is simply
absent from the matrix, so numeric code can never consume an "unknown" by
accident.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DimensionMismatchError, NotFoundError

UserId = str
ElementId = str


class Provenance(Enum):
    """How a value in a completed profile was obtained."""

    KNOWN = "known"
    PREDICTED = "predicted"


def _check_value(value: float) -> float:
    value = float(value)
    if not (-1.0 <= value <= 1.0):
        raise ValueError(f"preference {value!r} outside [-1, 1]")
    return value


def _check_id(kind: str, identifier: str) -> str:
    if not isinstance(identifier, str) or not identifier:
        raise ValueError(f"{kind} id must be a non-empty string, got {identifier!r}")
    return identifier


class PreferenceMatrix:
    """Sparse |users| x |elements| table of known preferences.

    Users and elements iterate in insertion order, which keeps seeded runs
    reproducible. The matrix is meant to be mutated only while it is being
    built; afterwards all access is read-only and safe to share across
    workers.
    """

    def __init__(self) -> None:
        self._rows: dict[UserId, dict[ElementId, float]] = {}
        self._cols: dict[ElementId, dict[UserId, float]] = {}

    def add_user(self, user_id: UserId) -> None:
        """Register a user; registering twice is a no-op."""
        self._rows.setdefault(_check_id("user", user_id), {})

    def add_element(self, element_id: ElementId) -> None:
        """Register an element; registering twice is a no-op."""
        self._cols.setdefault(_check_id("element", element_id), {})

    @property
    def users(self) -> list[UserId]:
        return list(self._rows)

    @property
    def elements(self) -> list[ElementId]:
        return list(self._cols)

    def has_user(self, user_id: UserId) -> bool:
        return user_id in self._rows

    def has_element(self, element_id: ElementId) -> bool:
        return element_id in self._cols

    @property
    def n_entries(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def set(self, user_id: UserId, element_id: ElementId, value: float) -> None:
        """Store a known preference, auto-registering ids as needed.

        Values outside [-1, 1] (including NaN) are rejected before storage.
        """
        value = _check_value(value)
        self.add_user(user_id)
        self.add_element(element_id)
        self._rows[user_id][element_id] = value
        self._cols[element_id][user_id] = value

    def _require_user(self, user_id: UserId) -> dict[ElementId, float]:
        try:
            return self._rows[user_id]
        except KeyError:
            raise NotFoundError(f"unknown user {user_id!r}") from None

    def _require_element(self, element_id: ElementId) -> dict[UserId, float]:
        try:
            return self._cols[element_id]
        except KeyError:
            raise NotFoundError(f"unknown element {element_id!r}") from None

    def get(self, user_id: UserId, element_id: ElementId) -> float | None:
        """Return the known preference, or None when it is unknown."""
        row = self._require_user(user_id)
        self._require_element(element_id)
        return row.get(element_id)

    def known(self, user_id: UserId, element_id: ElementId) -> bool:
        return self.get(user_id, element_id) is not None

    def known_count(self, user_id: UserId) -> int:
        """Number of elements with a known preference for this user."""
        return len(self._require_user(user_id))

    def known_elements(self, user_id: UserId) -> list[ElementId]:
        """Elements this user has a known preference on, in insertion order."""
        return list(self._require_user(user_id))

    def row(self, user_id: UserId) -> dict[ElementId, float]:
        """The user's known entries. Treat as read-only."""
        return self._require_user(user_id)

    def column(self, element_id: ElementId) -> dict[UserId, float]:
        """All known entries for one element. Treat as read-only."""
        return self._require_element(element_id)

    def knower_set(self, element_id: ElementId) -> set[UserId]:
        """Users with a known preference on the element."""
        return set(self._require_element(element_id))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PreferenceMatrix):
            return NotImplemented
        return (
            self.users == other.users
            and self.elements == other.elements
            and self._rows == other._rows
        )

    def __repr__(self) -> str:
        return (
            f"PreferenceMatrix({len(self._rows)} users, "
            f"{len(self._cols)} elements, {self.n_entries} entries)"
        )


@dataclass
class CompletedProfile:
    """A user's profile after filling unknowns with predictions.

    ``values`` entries marked KNOWN equal the matrix entry bit-for-bit.
    Under a skipping fallback policy, elements that could not be predicted
    are absent from both maps.
    """

    user: UserId
    values: dict[ElementId, float] = field(default_factory=dict)
    provenance: dict[ElementId, Provenance] = field(default_factory=dict)

    def known_elements(self) -> list[ElementId]:
        return [x for x, p in self.provenance.items() if p is Provenance.KNOWN]

    def predicted_elements(self) -> list[ElementId]:
        return [x for x, p in self.provenance.items() if p is Provenance.PREDICTED]


def distance(a: CompletedProfile, b: CompletedProfile) -> float:
    """Euclidean distance between two completed profiles.

    Both profiles must cover the same element set; otherwise the distance
    is not meaningful and DimensionMismatchError is raised.
    """
    if set(a.values) != set(b.values):
        raise DimensionMismatchError(
            f"profiles of {a.user!r} and {b.user!r} cover different elements"
        )
    return math.sqrt(sum((a.values[x] - b.values[x]) ** 2 for x in a.values))
