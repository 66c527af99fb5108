"""Profiles, tail models, and the weighted curvature tensor."""

import math

import numpy as np
import pytest

from greenlab import (
    BUILTIN_PROFILES,
    TailModel,
    builtin_profile,
    check_curvature_nonneg,
    ricci_f_radial,
    validate_profile,
)

from conftest import make_curved_profile


def test_builtin_names():
    assert set(BUILTIN_PROFILES) == {
        "euclidean",
        "euclidean_weighted_linear",
        "bryant_surrogate",
    }


@pytest.mark.parametrize("name", sorted(BUILTIN_PROFILES))
def test_builtins_validate_clean(name):
    assert validate_profile(builtin_profile(name, n=3)) == []
    assert validate_profile(builtin_profile(name, n=5)) == []


def test_unknown_builtin_rejected():
    with pytest.raises(ValueError):
        builtin_profile("torus")


def test_weight_slope_must_be_positive():
    with pytest.raises(ValueError):
        builtin_profile("euclidean_weighted_linear", weight_slope=0.0)


def test_euclidean_is_flat():
    p = builtin_profile("euclidean", n=4)
    for r in (0.1, 1.0, 7.0):
        s = ricci_f_radial(p, math.inf, r)
        assert s.ric_rr == pytest.approx(0.0, abs=1e-14)
        assert s.ric_tt == pytest.approx(0.0, abs=1e-14)


def test_linear_weight_has_negative_radial_curvature():
    # f concave decreasing on flat space: Hess f < 0 radially
    p = builtin_profile("euclidean_weighted_linear", n=3)
    ok, min_eig = check_curvature_nonneg(p, math.inf, np.geomspace(0.1, p.r_max, 64))
    assert not ok
    assert min_eig < 0.0


def test_curved_profile_nonneg_up_to_N_one():
    p = make_curved_profile()
    grid = np.geomspace(1e-6, p.r_max, 512)
    for N in (1.0, 2.0, math.inf):
        ok, min_eig = check_curvature_nonneg(p, N, grid)
        assert ok, f"N={N}: min eig {min_eig}"
        assert min_eig > 0.0


def test_N_zero_requires_constant_potential():
    p = builtin_profile("euclidean_weighted_linear", n=3)
    with pytest.raises(ValueError):
        ricci_f_radial(p, 0.0, 1.0)
    flat = builtin_profile("euclidean", n=3)
    s = ricci_f_radial(flat, 0.0, 1.0)
    assert s.min_eig == pytest.approx(0.0, abs=1e-14)


def test_negative_N_rejected():
    p = builtin_profile("euclidean", n=3)
    with pytest.raises(ValueError):
        ricci_f_radial(p, -1.0, 1.0)


def test_curvature_grid_bounds_enforced():
    p = builtin_profile("euclidean", n=3)
    with pytest.raises(ValueError):
        check_curvature_nonneg(p, math.inf, [0.0, 1.0])
    with pytest.raises(ValueError):
        check_curvature_nonneg(p, math.inf, [1.0, p.r_max * 2.0])


@pytest.mark.parametrize(
    "slope,growth,n,expected",
    [
        (-1.0, 0.5, 3, True),  # decaying weight always integrable
        (0.0, 1.0, 3, True),  # flat: phi^{1-n} ~ r^{-2}
        (0.0, 0.5, 3, False),  # sqrt warping alone decays too slowly
        (0.0, 0.5, 4, True),  # but more sphere dimensions save it
        (0.5, 1.0, 3, False),  # growing weight never integrable
    ],
)
def test_tail_integrability(slope, growth, n, expected):
    assert TailModel(growth, slope).integrable_at_infinity(n) is expected


def test_validate_flags_nonintegrable_tail():
    from greenlab import Profile, parse_expression

    p = Profile(
        n=3,
        phi=parse_expression("r"),
        f=parse_expression("0.5*r"),
        r_max=10.0,
        tail=TailModel(1.0, 0.5),
    )
    issues = validate_profile(p)
    assert any("integrable" in msg for msg in issues)


def test_f_origin_and_sources():
    p = builtin_profile("bryant_surrogate", n=3)
    assert p.f_origin == pytest.approx(0.0, abs=1e-15)
    assert "sqrt" in p.phi_source
    assert "sqrt" in p.f_source
