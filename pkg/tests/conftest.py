import pytest

from normcast import PreferenceMatrix


@pytest.fixture
def example_matrix() -> PreferenceMatrix:
    """Three users, three elements, partially known profiles.

    u1 knows x1, x2; u2 and u3 know x1, x3; u3 disagrees with the others.
    """
    m = PreferenceMatrix()
    m.set("u1", "x1", -1.0)
    m.set("u1", "x2", -1.0)
    m.set("u2", "x1", -1.0)
    m.set("u2", "x3", -1.0)
    m.set("u3", "x1", 1.0)
    m.set("u3", "x3", 1.0)
    return m
