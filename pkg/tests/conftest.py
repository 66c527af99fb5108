"""Shared fixtures: contexts are expensive (Green cache), so build once."""

import pytest

from greenlab import NumericConfig, Profile, TailModel, build_context, builtin_profile, parse_expression


@pytest.fixture(scope="session")
def numeric():
    return NumericConfig()


@pytest.fixture(scope="session")
def euclid3(numeric):
    return build_context(builtin_profile("euclidean", n=3), numeric)


@pytest.fixture(scope="session")
def euclid4(numeric):
    return build_context(builtin_profile("euclidean", n=4), numeric)


@pytest.fixture(scope="session")
def euclid5(numeric):
    return build_context(builtin_profile("euclidean", n=5), numeric)


@pytest.fixture(scope="session")
def weighted3(numeric):
    return build_context(builtin_profile("euclidean_weighted_linear", n=3), numeric)


@pytest.fixture(scope="session")
def bryant3(numeric):
    return build_context(builtin_profile("bryant_surrogate", n=3), numeric)


def make_curved_profile() -> Profile:
    # sqrt-type warping with a mild decreasing potential; Ric_f^N >= 0 up to
    # N = 1 on (0, r_max] (checked in the tests that rely on it)
    return Profile(
        n=3,
        phi=parse_expression("r/sqrt(1+r)"),
        f=parse_expression("-0.05*(sqrt(1+r^2)-1)"),
        r_max=10.0,
        tail=TailModel(0.5, -0.05),
    )


@pytest.fixture(scope="session")
def curved3(numeric):
    return build_context(make_curved_profile(), numeric)
