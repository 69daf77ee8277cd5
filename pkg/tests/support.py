"""Shared helpers: random matrix generators and brute-force reference oracles."""

from __future__ import annotations

import random

from normcast import PreferenceMatrix, SimilarityParams

# Multiples of 0.25 are exact binary floats, so separations computed from
# them are exact no matter the summation order; this lets oracle checks
# compare bit-for-bit and exercises genuine ties.
GRID_VALUES = [i / 4 for i in range(-4, 5)]


def make_random_matrix(
    rng: random.Random,
    n_users: int | None = None,
    n_elements: int | None = None,
    density: float = 0.5,
    max_users: int = 50,
    max_elements: int = 20,
    grid: bool = False,
) -> PreferenceMatrix:
    n_users = n_users if n_users is not None else rng.randint(2, max_users)
    n_elements = n_elements if n_elements is not None else rng.randint(1, max_elements)
    m = PreferenceMatrix()
    users = [f"u{i:03d}" for i in range(n_users)]
    elements = [f"x{j:03d}" for j in range(n_elements)]
    for u in users:
        m.add_user(u)
    for x in elements:
        m.add_element(x)
    for u in users:
        for x in elements:
            if rng.random() < density:
                value = rng.choice(GRID_VALUES) if grid else rng.uniform(-1.0, 1.0)
                m.set(u, x, value)
    return m


def copy_matrix(m: PreferenceMatrix) -> PreferenceMatrix:
    out = PreferenceMatrix()
    for u in m.users:
        out.add_user(u)
    for x in m.elements:
        out.add_element(x)
    for u in m.users:
        for x, value in m.row(u).items():
            out.set(u, x, value)
    return out


def naive_separation(m: PreferenceMatrix, u1: str, u2: str) -> float | None:
    """Direct definition: sum |difference| over the sorted common elements."""
    row1, row2 = m.row(u1), m.row(u2)
    common = sorted(set(row1) & set(row2))
    if not common:
        return None
    return sum(abs(row1[x] - row2[x]) for x in common)


def naive_similar_users(
    m: PreferenceMatrix,
    u: str,
    x: str,
    params: SimilarityParams,
    knowledge: PreferenceMatrix | None = None,
) -> list[tuple[str, float]] | None:
    """Full scan + stable sort reference for the neighbor selection.

    Builds the epsilon set and the nu closest set separately and unions
    them, returning members ordered by (separation, user id). None when no
    candidate is eligible.
    """
    pool = m if knowledge is None else knowledge
    separations: dict[str, float] = {}
    for candidate in pool.knower_set(x):
        if candidate == u or not m.has_user(candidate):
            continue
        common = set(m.row(u)) & set(m.row(candidate))
        if not common or len(common) < params.min_common:
            continue
        separations[candidate] = naive_separation(m, u, candidate)
    if not separations:
        return None
    eps_set = {c for c, s in separations.items() if s <= params.epsilon}
    by_closeness = sorted(separations, key=lambda c: (separations[c], c))
    nu_set = set(by_closeness[: params.nu])
    chosen = eps_set | nu_set
    return sorted(((c, separations[c]) for c in chosen), key=lambda cs: (cs[1], cs[0]))
