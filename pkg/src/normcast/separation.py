"""Separation measures between users, computed on commonly known preferences.

A separation measure is a relaxed distance: it only looks at elements both
users have known preferences on, is non-negative and symmetric, is zero
exactly when the users agree on every commonly known element, and satisfies
a triangle inequality once restricted to the pair's common elements. It is
undefined for pairs with no common elements.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable

from .errors import NoCommonElementsError
from .preference_model import ElementId, PreferenceMatrix, UserId


@dataclass(frozen=True)
class CommonElements:
    """Elements known to both users of a pair."""

    pair: tuple[UserId, UserId]
    elements: frozenset[ElementId]

    def __len__(self) -> int:
        return len(self.elements)


def common_elements(m: PreferenceMatrix, u1: UserId, u2: UserId) -> CommonElements:
    """The set of elements with known preferences for both users."""
    row1 = m.row(u1)
    row2 = m.row(u2)
    if len(row2) < len(row1):
        row1, row2 = row2, row1
    shared = frozenset(x for x in row1 if x in row2)
    return CommonElements(pair=(u1, u2), elements=shared)


class SeparationMeasure(ABC):
    """Interface for pluggable user-separation measures."""

    name: str = "abstract"

    @abstractmethod
    def evaluate(
        self,
        m: PreferenceMatrix,
        u1: UserId,
        u2: UserId,
        restrict_to: Iterable[ElementId] | None = None,
    ) -> float:
        """Separation of u1 and u2 over their (optionally restricted) common elements.

        Raises NoCommonElementsError when the effective common set is empty.
        """


class CumulativeSeparation(SeparationMeasure):
    """Sum of absolute preference differences over the common elements."""

    name = "cumulative"

    def evaluate(
        self,
        m: PreferenceMatrix,
        u1: UserId,
        u2: UserId,
        restrict_to: Iterable[ElementId] | None = None,
    ) -> float:
        row1 = m.row(u1)
        row2 = m.row(u2)
        # canonical iteration order so float summation is exactly symmetric
        if (len(row2), u2) < (len(row1), u1):
            row1, row2 = row2, row1
        keys: Iterable[ElementId] = row1 if restrict_to is None else restrict_to
        total = 0.0
        seen = 0
        for x in keys:
            v1 = row1.get(x)
            if v1 is None:
                continue
            v2 = row2.get(x)
            if v2 is None:
                continue
            total += abs(v1 - v2)
            seen += 1
        if seen == 0:
            raise NoCommonElementsError(
                f"{u1!r} and {u2!r} share no commonly known elements"
                + ("" if restrict_to is None else " within the restriction")
            )
        return total


def cumulative_separation(
    m: PreferenceMatrix,
    u1: UserId,
    u2: UserId,
    restrict_to: Iterable[ElementId] | None = None,
) -> float:
    """Convenience wrapper around CumulativeSeparation().evaluate."""
    return CumulativeSeparation().evaluate(m, u1, u2, restrict_to)


SEPARATION_MEASURES: dict[str, type[SeparationMeasure]] = {
    CumulativeSeparation.name: CumulativeSeparation,
}


def get_separation_measure(name: str) -> SeparationMeasure:
    """Instantiate a registered separation measure by name."""
    try:
        return SEPARATION_MEASURES[name]()
    except KeyError:
        known = ", ".join(sorted(SEPARATION_MEASURES))
        raise ValueError(f"unknown separation measure {name!r} (have: {known})") from None
