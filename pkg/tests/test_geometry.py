"""Pointwise tensor scalars, drift Laplacians, and the Bochner defect."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from greenlab import (
    bochner_residual,
    delta_f_weighted,
    f_laplacian_radial,
    point_quantities,
    radial_state,
)


def test_sqrt_level_closed_forms(euclid4):
    # n = 4, k = 6 puts b = sqrt(r) on flat space; every scalar has a
    # hand-computed power law:
    #   |Hess b^2|^2 = 3/r^2        Delta b^2 = 3/r
    #   Ric_f(grad b^2, .) = 0      lam = -1/(4r)
    #   |B|^2 = 3/(4 r^2)           |B(nu,.)|^2 = 9/(16 r^2)
    bd = euclid4.bdata(6.0)
    r = np.geomspace(0.05, 5.0, 24)
    s = radial_state(euclid4.profile, bd, r)
    assert_allclose(s.b, np.sqrt(r), rtol=1e-12)
    pq = point_quantities(s)
    assert_allclose(pq.hess_b2_sq, 3.0 / r**2, rtol=1e-11)
    assert_allclose(pq.lap_b2, 3.0 / r, rtol=1e-11)
    assert_allclose(pq.lapf_b2, 3.0 / r, rtol=1e-11)
    assert_allclose(pq.ricf_grad, np.zeros_like(r), atol=1e-11)
    assert_allclose(pq.lam, -1.0 / (4.0 * r), rtol=1e-10)
    assert_allclose(pq.B_sq, 3.0 / (4.0 * r**2), rtol=1e-10)
    assert_allclose(pq.B_nu_sq, 9.0 / (16.0 * r**2), rtol=1e-10)


def test_weighted_trace_identity(weighted3, bryant3, curved3):
    # Delta_f b^2 = 2 k |grad b|^2 holds for every profile by construction
    for ctx, k in ((weighted3, 3.0), (bryant3, 4.5), (curved3, 7.0)):
        bd = ctx.bdata(k)
        r = np.geomspace(1e-2, 0.8 * ctx.profile.r_max, 48)
        s = radial_state(ctx.profile, bd, r)
        pq = point_quantities(s)
        assert_allclose(pq.lapf_b2, 2.0 * k * s.db**2, rtol=1e-9)


def test_radial_drift_laplacian(euclid3):
    # Delta_f u = u'' + ((n-1) phi'/phi - f') u' for radial u; flat space
    # turns r^2 into 2n
    bd = euclid3.bdata(3.0)
    r = np.geomspace(0.1, 10.0, 16)
    s = radial_state(euclid3.profile, bd, r)
    val = f_laplacian_radial(s, 2.0 * r, np.full_like(r, 2.0))
    assert_allclose(val, np.full_like(r, 6.0), rtol=1e-12)


def test_weighted_power_matches_leibniz(bryant3):
    # closed form of Delta_f(b^{2q} |grad b|^beta) against a direct product
    # expansion through third derivatives of b
    bd = bryant3.bdata(3.5)
    r = np.geomspace(1e-2, 20.0, 40)
    s = radial_state(bryant3.profile, bd, r)
    d3b = bd.d3b(r)
    drift = 2.0 * s.log_dphi - s.df
    for q, beta in ((0.0, 2.0), (1.0, 2.0), (0.5, 3.0), (1.5, -1.0)):
        u1 = 2.0 * q * s.b ** (2.0 * q - 1.0) * s.db if q != 0.0 else np.zeros_like(r)
        u2 = (
            2.0 * q * (2.0 * q - 1.0) * s.b ** (2.0 * q - 2.0) * s.db**2
            + 2.0 * q * s.b ** (2.0 * q - 1.0) * s.d2b
            if q != 0.0
            else np.zeros_like(r)
        )
        v1 = beta * s.db ** (beta - 1.0) * s.d2b
        v2 = beta * (beta - 1.0) * s.db ** (beta - 2.0) * s.d2b**2 + beta * s.db ** (
            beta - 1.0
        ) * d3b
        w = s.b ** (2.0 * q) * s.db**beta
        d1 = u1 * s.db**beta + s.b ** (2.0 * q) * v1
        d2 = u2 * s.db**beta + 2.0 * u1 * v1 + s.b ** (2.0 * q) * v2
        direct = d2 + drift * d1
        closed = delta_f_weighted(s, q, beta)
        scale = np.abs(direct) + np.abs(closed) + np.abs(w)
        assert float(np.max(np.abs(direct - closed) / scale)) < 1e-9, (q, beta)


def test_beta_zero_rules(euclid3):
    # beta = 0 is only legal at q = 0, where the expression vanishes
    bd = euclid3.bdata(3.0)
    s = radial_state(euclid3.profile, bd, np.asarray([1.0]))
    assert_allclose(delta_f_weighted(s, 0.0, 0.0), [0.0])
    with pytest.raises(ValueError):
        delta_f_weighted(s, 1.0, 0.0)


@pytest.mark.parametrize("ctx_name", ["euclid3", "weighted3", "bryant3", "curved3"])
def test_bochner_defect_small(ctx_name, request):
    ctx = request.getfixturevalue(ctx_name)
    bd = ctx.bdata(float(ctx.profile.n))
    r = np.geomspace(1e-2, 0.8 * ctx.profile.r_max, 32)
    s = radial_state(ctx.profile, bd, r)

    def u_r2(x):
        x = np.asarray(x, dtype=float)
        return x * x, 2.0 * x, np.full_like(x, 2.0)

    def u_b(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return (
            np.atleast_1d(bd.b(x)),
            np.atleast_1d(bd.db(x)),
            np.atleast_1d(bd.d2b(x)),
        )

    assert bochner_residual(s, u_r2) < 1e-6
    assert bochner_residual(s, u_b) < 1e-6


def test_state_rejects_nonpositive_radius(euclid3):
    bd = euclid3.bdata(3.0)
    with pytest.raises(ValueError):
        radial_state(euclid3.profile, bd, 0.0)


def test_state_scalar_and_tail(bryant3):
    bd = bryant3.bdata(3.0)
    s = radial_state(bryant3.profile, bd, 1.5)
    assert isinstance(s.phi, float)
    # beyond r_max the declared tail model supplies phi and f
    rmax = bryant3.profile.r_max
    s_out = radial_state(bryant3.profile, bd, 2.0 * rmax)
    a = bryant3.profile.tail.phi_growth_exponent
    jm = bryant3.profile.phi_jet(rmax)
    assert s_out.phi == pytest.approx(float(jm.value) * 2.0**a, rel=1e-12)
    assert s_out.df == pytest.approx(bryant3.profile.tail.f_slope, rel=1e-12)
