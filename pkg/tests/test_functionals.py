"""Area and volume functionals, bulk integrals, and the level invariant."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from greenlab import (
    Params,
    admissibility,
    area_functional,
    bulk_integral,
    bulk_integral_between,
    curve,
    default_rho_grid,
    h_invariant,
    small_r_limits,
    sphere_area,
    volume_functional,
)


def test_sphere_area_values():
    assert sphere_area(2) == pytest.approx(2.0 * math.pi)
    assert sphere_area(3) == pytest.approx(4.0 * math.pi)
    assert sphere_area(4) == pytest.approx(2.0 * math.pi**2)
    with pytest.raises(ValueError):
        sphere_area(1)


def test_params_defaults_and_validation():
    prm = Params(k=4.0, l=5.0, beta=2.0, p=1.0)
    assert prm.alpha == pytest.approx(3.0 * 4.0 - 1.0 - 5.0 - 2.0)
    assert prm.with_(alpha=7.0).alpha == 7.0
    with pytest.raises(ValueError):
        Params(k=2.0, l=3.0, beta=1.0)
    with pytest.raises(ValueError):
        Params(k=3.0, l=3.0, beta=1.0, N=-2.0)


def test_admissibility_constants():
    adm = admissibility(3, Params(k=4.0, l=6.0, beta=0.5, p=0.0, alpha=4.0, c=0.25, d=-0.5))
    # C(n,k,x) = (n-2)(k-x) - beta (k-n)
    assert adm.C_nkp == pytest.approx(1.0 * 4.0 - 0.5 * 1.0)
    assert adm.C_nkl == pytest.approx(1.0 * (-2.0) - 0.5 * 1.0)
    assert adm.lambda1 == pytest.approx(3.0 * 4.0 - 0.0 - 6.0 - 2.0 - 4.0)
    assert adm.lambda2 == pytest.approx((0.0 + 2.0 - 8.0) * 4.0 - 0.5 * 4.0 - 4.0 * (0.0 - 6.0))
    # lambda3 = (4/beta)(k + d - l + c - 1)(k + d - l) - 4k
    assert adm.lambda3 == pytest.approx((4.0 / 0.5) * (-3.25) * (-2.5) - 16.0)
    assert adm.lambda4 == pytest.approx(12.0 - 12.0 - 3.0 + 0.25 - 1.0)
    assert math.isnan(admissibility(3, Params(k=3.0, l=3.0, beta=0.0)).lambda3)


def test_flat_area_is_spherical(euclid3):
    # k = l = n keeps A constant equal to the unit sphere volume
    bd = euclid3.bdata(3.0)
    prm = Params(k=3.0, l=3.0, beta=2.0)
    for rho in (1e-3, 0.1, 1.0, 5.0):
        assert area_functional(bd, euclid3.profile, prm, rho) == pytest.approx(
            4.0 * math.pi, rel=1e-12
        )


def test_flat_area_power_law(euclid3):
    # l != n only shifts the level exponent: A = omega rho^{n-l}
    bd = euclid3.bdata(3.0)
    prm = Params(k=3.0, l=4.5, beta=2.0)
    for rho in (0.01, 0.7, 3.0):
        expected = 4.0 * math.pi * rho ** (3.0 - 4.5)
        assert area_functional(bd, euclid3.profile, prm, rho) == pytest.approx(
            expected, rel=1e-11
        )


def test_flat_volume_value(euclid3):
    bd = euclid3.bdata(3.0)
    # V(rho) = omega/n at p = 0 (flat, k = l = n); p = 2 gives omega
    assert volume_functional(bd, euclid3.profile, Params(k=3.0, l=3.0, beta=2.0), 1.0) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-10)
    assert volume_functional(bd, euclid3.profile, Params(k=3.0, l=3.0, beta=2.0, p=2.0), 1.0) == pytest.approx(4.0 * math.pi, rel=1e-10)


def test_volume_requires_positive_constant(euclid3):
    bd = euclid3.bdata(3.0)
    # C(n,k,p) = (n-2)(k-p) - beta(k-n) <= 0 diverges at the pole
    with pytest.raises(ValueError):
        volume_functional(bd, euclid3.profile, Params(k=3.0, l=3.0, beta=2.0, p=3.0), 1.0)


def test_flat_bulk_hessian_term(euclid3):
    # int of |Hess b^2|^2 b^{-l-1} weight on flat space, k = l = n = 3,
    # beta = 2, at rho = 1: the integrand collapses to 8 omega r^2 dr... times
    # level prefactor; the closed value is 8 pi
    bd = euclid3.bdata(3.0)
    prm = Params(k=3.0, l=3.0, beta=2.0)
    val = bulk_integral(bd, euclid3.profile, prm, 1.0, ("hess_b2_sq",))
    assert val == pytest.approx(8.0 * math.pi, rel=1e-10)


def test_curve_derivatives_match_finite_differences(curved3):
    # dA and dV against central differences of A and V on a fine level grid
    prm = Params(k=4.0, l=4.0, beta=2.0, p=0.0)
    bd = curved3.bdata(4.0)
    rho0 = float(bd.b(2.0))
    h = 1e-4 * rho0
    pts = curve(bd, curved3.profile, prm, np.asarray([rho0 - h, rho0, rho0 + h]))
    dA_fd = (pts[2].A - pts[0].A) / (2.0 * h)
    dV_fd = (pts[2].V - pts[0].V) / (2.0 * h)
    assert pts[1].dA == pytest.approx(dA_fd, rel=1e-6)
    assert pts[1].dV == pytest.approx(dV_fd, rel=1e-6)


def test_volume_derivative_identity(bryant3):
    # rho V' = (p - l) V + A pointwise, exactly as implemented
    prm = Params(k=3.0, l=3.5, beta=1.0, p=1.0)
    bd = bryant3.bdata(3.0)
    rho = default_rho_grid(bd, 32)
    pts = curve(bd, bryant3.profile, prm, rho)
    for c in pts:
        lhs = c.rho * c.dV
        rhs = (prm.p - prm.l) * c.V + c.A
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("ctx_name", ["euclid3", "weighted3", "bryant3", "curved3"])
@pytest.mark.parametrize("k_shift", [0.0, 1.0, 3.0])
def test_h_invariant_constant(ctx_name, k_shift, request):
    ctx = request.getfixturevalue(ctx_name)
    n = ctx.profile.n
    k = float(n) + k_shift
    bd = ctx.bdata(k)
    m = (n - 2.0) / (k - 2.0)
    expected = m * sphere_area(n) * math.exp(-ctx.profile.f_origin)
    rho = default_rho_grid(bd, 16)
    vals = np.asarray([h_invariant(bd, ctx.profile, float(v)) for v in rho])
    assert_allclose(vals, expected, rtol=1e-8)


def test_small_r_limit_classification():
    # three sign cases of C(n,k,l) at beta = 2, n = 3
    lim = small_r_limits(3, Params(k=3.0, l=2.5, beta=2.0))  # C = 0.5 > 0
    assert lim["A_limit"].tag == "zero"
    lim = small_r_limits(3, Params(k=4.0, l=2.0, beta=2.0))  # C = 0
    assert lim["A_limit"].tag == "finite"
    assert lim["A_limit"].value == pytest.approx((1.0 / 2.0) ** 3 * 4.0 * math.pi)
    assert lim["V_limit"].tag == "finite"
    assert lim["V_limit"].value == pytest.approx(lim["A_limit"].value / 2.0)
    lim = small_r_limits(3, Params(k=3.0, l=4.0, beta=2.0))  # C = -1 < 0
    assert lim["A_limit"].tag == "infinite"
    # V undefined whenever its own constant is nonpositive
    lim = small_r_limits(3, Params(k=3.0, l=3.0, beta=2.0, p=3.0))
    assert lim["V_limit"].tag == "undefined"


def test_between_integral_requires_ordered_levels(euclid3):
    bd = euclid3.bdata(3.0)
    prm = Params(k=3.0, l=3.0, beta=2.0)
    with pytest.raises(ValueError):
        bulk_integral_between(bd, euclid3.profile, prm, 2.0, 1.0, ("B_sq",))
