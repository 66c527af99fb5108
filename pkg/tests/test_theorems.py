"""Registry checks: derivative identities, monotonicity, limits, brackets."""

import math

import numpy as np
import pytest

from greenlab import (
    CHECK_IDS,
    CheckReport,
    HypothesisRecord,
    Params,
    bryant_limit,
    build_context,
    builtin_profile,
    check_identity_g,
    check_identity_kln,
    run_check,
    solve_l_window,
)


def test_registry_contents():
    assert len(CHECK_IDS) == 16
    assert len(set(CHECK_IDS)) == 16
    for cid in ("thm-4.3", "thm-1.2", "thm-6.3", "identities-3x", "bochner"):
        assert cid in CHECK_IDS


def test_unknown_check_id(euclid3):
    with pytest.raises(KeyError):
        run_check("nope", euclid3)


# -- derivative identities ----------------------------------------------------


@pytest.mark.parametrize("ctx_name", ["euclid4", "bryant3", "weighted3"])
@pytest.mark.parametrize(
    "prm",
    [
        Params(k=4.0, l=4.0, beta=2.0, p=1.0),
        Params(k=3.5, l=5.0, beta=-1.0, p=0.0, alpha=1.25),
    ],
    ids=["balanced", "offset-alpha"],
)
def test_one_level_derivative_identity(ctx_name, prm, request):
    ctx = request.getfixturevalue(ctx_name)
    report = run_check("thm-4.3", ctx, prm, grid=64)
    assert report.hypotheses_ok
    assert report.verdict == "pass"
    assert report.max_residual <= 1e-7


def test_equal_order_identity(bryant3):
    report = run_check("cor-4.4", bryant3, Params(k=4.0, l=4.0, beta=2.0, p=1.0), grid=64)
    assert report.verdict == "pass"


def test_equal_order_identity_rejects_mismatched_orders(bryant3):
    with pytest.raises(ValueError, match="k = l"):
        run_check("cor-4.4", bryant3, Params(k=4.0, l=5.0, beta=2.0))


@pytest.mark.parametrize("ctx_name", ["euclid4", "bryant3"])
def test_two_level_identity(ctx_name, request):
    ctx = request.getfixturevalue(ctx_name)
    prm = Params(k=4.0, l=4.0, beta=2.0, p=1.0, c=0.5, d=-1.0)
    report = run_check("thm-4.5", ctx, prm)
    assert report.verdict == "pass"
    assert report.max_residual <= 1e-7


def test_two_level_identity_gated_at_zero_coupling(euclid3):
    # the quartic coefficient carries a 1/beta factor, so beta = 0 is excluded
    report = check_identity_g(euclid3, Params(k=3.0, l=3.0, beta=0.0))
    assert not report.hypotheses_ok
    assert report.verdict == "hypothesis-not-met"


def test_two_level_identity_explicit_band(bryant3):
    prm = Params(k=3.0, l=3.0, beta=2.0, p=0.0, c=0.0, d=1.0)
    report = check_identity_g(bryant3, prm, rho1=0.5, rho2=2.0)
    assert report.verdict == "pass"


@pytest.mark.parametrize("mode,cid", [("grid", "thm-6.2"), ("pair", "thm-6.3")])
@pytest.mark.parametrize("ctx_name", ["euclid3", "weighted3", "bryant3"])
def test_matched_order_identities(ctx_name, mode, cid, request):
    ctx = request.getfixturevalue(ctx_name)
    n = ctx.profile.n
    prm = Params(k=float(n), l=float(n), beta=2.0, p=1.0)
    report = run_check(cid, ctx, prm, grid=64)
    assert report.check_id == cid
    assert report.verdict == "pass"
    assert report.max_residual <= 1e-7


def test_matched_order_identity_rejects_general_orders(euclid3):
    with pytest.raises(ValueError, match="k = l = n"):
        check_identity_kln(euclid3, Params(k=4.0, l=4.0, beta=2.0))
    with pytest.raises(ValueError, match="mode"):
        check_identity_kln(euclid3, Params(k=3.0, l=3.0, beta=2.0), mode="bogus")


# -- root window for the order parameter --------------------------------------


def test_order_window_exact_values():
    assert solve_l_window(12.0, 2.0) == (16.0, 18.0)


def test_order_window_empty_when_discriminant_negative():
    # (k-2)^2 < 4 beta k for k = 4, beta = 2
    assert solve_l_window(4.0, 2.0) is None


def test_order_window_double_root_on_boundary():
    k = 8.0
    beta = (k - 2.0) ** 2 / (4.0 * k)
    lo, hi = solve_l_window(k, beta)
    assert lo == hi == (3.0 * k - 2.0) / 2.0


# -- monotonicity checks -------------------------------------------------------


FLAT_PRM = Params(k=3.0, l=3.0, beta=2.0, p=0.0, N=0.0)


@pytest.mark.parametrize("cid", ["thm-1.2", "thm-1.3", "cor-5.1", "prop-5.2"])
def test_monotone_flat_space(euclid3, cid):
    report = run_check(cid, euclid3, FLAT_PRM, grid=64)
    assert report.hypotheses_ok, [h for h in report.hypothesis_status if not h.ok]
    assert report.verdict == "pass"
    assert report.min_margin >= -1e-8


@pytest.mark.parametrize("cid", ["thm-1.2", "thm-1.3", "cor-5.1"])
def test_monotone_curved_profile(curved3, cid):
    prm = Params(k=4.0, l=4.0, beta=2.0, p=0.0, N=1.0)
    report = run_check(cid, curved3, prm, grid=64)
    assert report.hypotheses_ok, [h for h in report.hypothesis_status if not h.ok]
    assert report.verdict == "pass"


def test_monotone_gated_by_curvature(weighted3):
    # the linear-weight profile has a strictly negative radial eigenvalue
    prm = Params(k=4.0, l=4.0, beta=2.0, p=0.0, N=1.0)
    report = run_check("thm-1.2", weighted3, prm, grid=32)
    assert not report.hypotheses_ok
    assert report.verdict == "hypothesis-not-met"
    failed = [h.name for h in report.hypothesis_status if not h.ok]
    assert any("curvature" in name for name in failed)


def test_monotone_gated_by_order_bounds(euclid3):
    # l > 2k - 2 violates the order window of the dQ >= 0 statement
    prm = Params(k=3.0, l=5.0, beta=2.0, p=0.0, N=0.0)
    report = run_check("thm-1.2", euclid3, prm, grid=32)
    assert report.verdict == "hypothesis-not-met"


def test_high_order_monotone(euclid4):
    prm = Params(k=12.0, l=17.0, beta=2.0, p=2.0)
    report = run_check("thm-6.1", euclid4, prm, grid=64)
    assert report.hypotheses_ok, [h for h in report.hypothesis_status if not h.ok]
    assert report.verdict == "pass"
    assert report.extras["l_window"] == "(16, 18)"


def test_high_order_monotone_gated_outside_window(euclid4):
    prm = Params(k=12.0, l=19.0, beta=2.0, p=2.0)
    report = run_check("thm-6.1", euclid4, prm, grid=32)
    assert report.verdict == "hypothesis-not-met"


def test_paired_order_monotone(euclid4):
    report = run_check("thm-1.4", euclid4, Params(k=12.0, l=17.0, beta=2.0), grid=64)
    assert report.hypotheses_ok
    assert report.verdict == "pass"
    # both branches report their own margins
    assert report.extras["min_first_margin"] >= -1e-8
    assert report.extras["min_second_margin"] >= -1e-8
    assert report.extras["l_first_inside_window"] == "True"


def test_paired_order_monotone_needs_dimension(euclid3):
    report = run_check("thm-1.4", euclid3, Params(k=12.0, l=17.0, beta=2.0), grid=32)
    assert report.verdict == "hypothesis-not-met"


@pytest.mark.parametrize("ctx_name", ["euclid3", "euclid5"])
def test_equal_order_scaled_slope_monotone(ctx_name, request):
    ctx = request.getfixturevalue(ctx_name)
    n = ctx.profile.n
    report = run_check("cor-6.4", ctx, Params(k=float(n), l=float(n), beta=2.0), grid=64)
    assert report.hypotheses_ok, [h for h in report.hypothesis_status if not h.ok]
    assert report.verdict == "pass"


# -- small-level limits ---------------------------------------------------------


def test_small_level_exponent_classification(euclid3):
    # C(n,k,l) > 0: A decays with a measurable positive log-log slope
    report = run_check("lemma-4.1", euclid3, Params(k=3.0, l=2.5, beta=2.0), grid=8)
    assert report.verdict == "pass"
    assert report.extras["A_tag"] == "zero"

    # C(n,k,l) = 0: finite limit, compare against the closed-form constant
    report0 = run_check("lemma-4.1", euclid3, Params(k=4.0, l=2.0, beta=2.0), grid=8)
    assert report0.verdict == "pass"
    assert report0.extras["A_tag"] == "finite"
    assert report0.extras["A_const_rel_dev"] <= 1e-3

    # C(n,k,l) < 0: A blows up at the pole
    report_neg = run_check("lemma-4.1", euclid3, Params(k=3.0, l=4.0, beta=2.0), grid=8)
    assert report_neg.extras["A_tag"] == "infinite"


# -- pointwise identity suites ---------------------------------------------------


@pytest.mark.parametrize("ctx_name", ["euclid3", "weighted3", "bryant3"])
@pytest.mark.parametrize("beta", [-1.0, 0.5, 2.0, 3.0])
def test_pointwise_identity_suite(ctx_name, beta, request):
    ctx = request.getfixturevalue(ctx_name)
    prm = Params(k=3.5, l=3.5, beta=beta, p=1.0)
    report = run_check("identities-3x", ctx, prm)
    assert report.verdict == "pass"
    assert report.max_residual <= 1e-7


@pytest.mark.parametrize("ctx_name", ["euclid4", "curved3"])
def test_second_order_commutation(ctx_name, request):
    ctx = request.getfixturevalue(ctx_name)
    report = run_check("bochner", ctx, Params(k=5.0, l=5.0, beta=2.0))
    assert report.verdict == "pass"
    assert report.max_residual <= 1e-6


def test_gradient_bound_check(euclid4):
    report = run_check("prop-1.2", euclid4, Params(k=4.0, l=4.0, beta=2.0))
    assert report.check_id == "prop-1.2"
    assert report.verdict == "pass"


# -- report plumbing -------------------------------------------------------------


def test_finalize_fail_verdict():
    report = CheckReport(check_id="x", description="d", tolerance=1e-6, max_residual=1e-3)
    assert report.finalize().verdict == "fail"


def test_finalize_hypothesis_gate_wins():
    report = CheckReport(
        check_id="x",
        description="d",
        tolerance=1e-6,
        max_residual=0.0,
        hypothesis_status=[HypothesisRecord("h", False, "")],
    )
    assert report.finalize().verdict == "hypothesis-not-met"


def test_margin_fail_verdict():
    report = CheckReport(check_id="x", description="d", tolerance=1e-8, min_margin=-1.0)
    assert report.finalize().verdict == "fail"


# -- pole-at-infinity bracket -----------------------------------------------------


def test_bracket_limit_three_dimensional(bryant3):
    rep = bryant_limit(bryant3)
    assert rep.predicted_limit == pytest.approx(1.0)
    assert rep.rel_deviation <= 0.05
    assert rep.sign == "positive"
    assert rep.direction == "nondecreasing"
    assert rep.matches_expected is True
    assert rep.verdict == "pass"


def test_bracket_limit_covers_both_signs(numeric):
    ctx5 = build_context(builtin_profile("bryant_surrogate", n=5), numeric)
    rep5 = bryant_limit(ctx5)
    assert rep5.predicted_limit == pytest.approx(-1.0 / 9.0)
    assert rep5.rel_deviation <= 0.05
    assert rep5.sign == "negative"
    assert rep5.direction == "nonincreasing"
    assert rep5.verdict == "pass"

    ctx4 = build_context(builtin_profile("bryant_surrogate", n=4), numeric)
    rep4 = bryant_limit(ctx4)
    assert rep4.predicted_limit == 0.0
    assert rep4.sign == "indeterminate"
    assert rep4.matches_expected is None
    assert rep4.verdict == "pass"
