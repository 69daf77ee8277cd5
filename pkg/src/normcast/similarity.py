"""Selection of the similar users used to predict one (user, element) query.

The neighbor set unions two criteria: every eligible candidate whose
separation from the query user is at most ``epsilon``, and the ``nu``
closest candidates regardless of their separation. Candidates must know
the query element and share at least ``min_common`` known elements with
the query user.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoSimilarUsersError
from .preference_model import ElementId, PreferenceMatrix, UserId
from .separation import SeparationMeasure


@dataclass(frozen=True)
class SimilarityParams:
    """Neighbor-selection parameters.

    epsilon: admit every candidate separated by at most this much.
    nu: always keep at least this many closest candidates.
    min_common: candidates need at least this many commonly known elements
        with the query user before their separation is trusted.
    """

    epsilon: float = 0.0
    nu: int = 5
    min_common: int = 5

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.nu < 1:
            raise ValueError(f"nu must be >= 1, got {self.nu}")
        if self.min_common < 0:
            raise ValueError(f"min_common must be >= 0, got {self.min_common}")


@dataclass
class SimilarSet:
    """Neighbors selected for one (user, element) query.

    ``members`` is sorted by ascending separation, ties broken by user id,
    and every member has a known preference on the query element.
    """

    user: UserId
    element: ElementId
    members: list[tuple[UserId, float]]
    params: SimilarityParams

    def __len__(self) -> int:
        return len(self.members)

    def neighbor_ids(self) -> list[UserId]:
        return [uid for uid, _ in self.members]

    def mean_separation(self) -> float:
        return sum(sep for _, sep in self.members) / len(self.members)


def knowers(m: PreferenceMatrix, x: ElementId) -> set[UserId]:
    """Users with a known preference on the element."""
    return m.knower_set(x)


def similar_users(
    m: PreferenceMatrix,
    sep: SeparationMeasure,
    u: UserId,
    x: ElementId,
    params: SimilarityParams,
    *,
    knowledge: PreferenceMatrix | None = None,
) -> SimilarSet:
    """Select the neighbors of ``u`` for predicting element ``x``.

    Candidates are the users of ``knowledge`` (default: ``m``) that know
    ``x``, excluding ``u`` itself, restricted to those whose common known
    elements with ``u`` in ``m`` are nonempty and number at least
    ``params.min_common``. Separations are always measured on ``m``; the
    split lets an evaluation harness assess similarity on a reduced view
    of the data while drawing candidates from a full pool.

    Raises NoSimilarUsersError when no candidate survives the filters.
    """
    pool = m if knowledge is None else knowledge
    row_u = m.row(u)  # query user must be registered where separations are measured
    scored: list[tuple[float, UserId]] = []
    for candidate in pool.knower_set(x):
        if candidate == u or not m.has_user(candidate):
            continue
        row_c = m.row(candidate)
        if len(row_c) < len(row_u):
            commons = [e for e in row_c if e in row_u]
        else:
            commons = [e for e in row_u if e in row_c]
        if not commons or len(commons) < params.min_common:
            continue
        # restricting to the (full) common set cannot change the value but
        # spares the measure a second scan over the rows
        scored.append((sep.evaluate(m, u, candidate, restrict_to=commons), candidate))
    if not scored:
        raise NoSimilarUsersError(f"no eligible similar users for ({u!r}, {x!r})")
    scored.sort(key=lambda item: (item[0], item[1]))
    within_epsilon = sum(1 for separation, _ in scored if separation <= params.epsilon)
    cutoff = max(params.nu, within_epsilon)
    members = [(uid, separation) for separation, uid in scored[:cutoff]]
    return SimilarSet(user=u, element=x, members=members, params=params)
