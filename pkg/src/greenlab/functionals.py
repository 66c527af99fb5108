"""Weighted area/volume functionals of level sets of b and their bulk terms.

With rho = b(r), the two basic quantities are

    A(rho) = rho^{1-l} * omega * phi^{n-1} * (b')^{beta+1} * e^{-f},
    V(rho) = rho^{p-l} * omega * int_0^r (b')^{2+beta} b^{-p} e^{-f} phi^{n-1} ds,

omega the unit (n-1)-sphere volume.  Near the pole b ~ r^m with
m = (n-2)/(k-2) and every integrand here behaves like a power s^E with
E = C(n,k,p)/(k-2) - 1, C(n,k,p) = (n-2)(k-p) - beta(k-n); the singular
power is integrated in closed form and only the remainder is quadratured,
so the functionals stay accurate uniformly down to small levels.  In the
level variable the same exponent reads C/(n-2) - 1.

Derivatives in rho are chain-rule closed forms; the V derivative uses

    dV = ((p - l) V + A) / rho,

which is exact for these definitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exprcalc import eval_jet2
from .geometry import RadialState, point_quantities, radial_state
from .green import R_CACHE_MIN, BData
from .profile import Profile
from .quadrature import adaptive_integral, log_breakpoints, panel_integrals

__all__ = [
    "Params",
    "Admissibility",
    "CurvePoint",
    "TaggedLimit",
    "sphere_area",
    "admissibility",
    "area_functional",
    "volume_functional",
    "curve",
    "default_rho_grid",
    "small_r_limits",
    "h_invariant",
    "bulk_integral",
    "bulk_integral_grid",
    "bulk_integral_between",
    "slope_integral_between",
    "TERM_KEYS",
]

TERM_KEYS = (
    "hess_b2_sq",
    "B_sq",
    "ricf_grad",
    "grad_grad",
    "db4",
    "grad_f_cross",
    "grad_f_sq",
)


@dataclass(frozen=True)
class Params:
    """Exponent bundle for the functionals.

    alpha defaults to 3k - p - l - 2, the balanced choice that zeroes the
    first admissibility coefficient; c and d only matter for the two-level
    identity.  N is the dimension parameter of the curvature hypothesis
    (math.inf for the plain weighted tensor).
    """

    k: float
    l: float
    beta: float
    p: float = 0.0
    N: float = math.inf
    alpha: float | None = None
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self) -> None:
        if not self.k > 2.0:
            raise ValueError("k must exceed 2")
        if self.N != math.inf and self.N < 0.0:
            raise ValueError("N must be nonnegative or math.inf")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 3.0 * self.k - self.p - self.l - 2.0)

    def with_(self, **kw) -> "Params":
        return replace(self, **kw)


@dataclass(frozen=True)
class Admissibility:
    """Constant bundle entering the integral identities.

    lambda3 is NaN when beta = 0 (its formula divides by beta); checks that
    need it must reject that case explicitly.
    """

    C_nkp: float
    C_nkl: float
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float


@dataclass(frozen=True)
class CurvePoint:
    rho: float
    r: float
    A: float
    V: float
    dA: float
    dV: float


@dataclass(frozen=True)
class TaggedLimit:
    """Small-level limit classification: tag in zero/finite/infinite/undefined."""

    tag: str
    value: float = math.nan


def sphere_area(n: int) -> float:
    """Volume of the unit (n-1)-sphere: 2 pi^{n/2} / Gamma(n/2)."""
    if n < 2:
        raise ValueError("need n >= 2")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def _C(n: int, k: float, x: float, beta: float) -> float:
    return (n - 2.0) * (k - x) - beta * (k - n)


def admissibility(n: int, prm: Params) -> Admissibility:
    k, l, beta, p, alpha = prm.k, prm.l, prm.beta, prm.p, prm.alpha
    c, d = prm.c, prm.d
    lambda3 = math.nan
    if beta != 0.0:
        lambda3 = (4.0 / beta) * (k + d - l + c - 1.0) * (k + d - l) - 4.0 * k
    return Admissibility(
        C_nkp=_C(n, k, p, beta),
        C_nkl=_C(n, k, l, beta),
        lambda1=3.0 * k - p - l - 2.0 - alpha,
        lambda2=(p + 2.0 - 2.0 * k) * (k - p) - beta * k - alpha * (p - l),
        lambda3=lambda3,
        lambda4=3.0 * k - 2.0 * l - 3.0 + c + 2.0 * d,
    )


# -- area ------------------------------------------------------------------


def _log_area_aggregate(bd: BData, state: RadialState, beta: float):
    """log of omega * phi^{n-1} * db^{beta+1} * e^{-f} at the state radius."""
    n = state.n
    log_db = np.log(state.db)
    return (
        math.log(sphere_area(n))
        + (n - 1.0) * np.log(state.phi)
        + (beta + 1.0) * log_db
        - state.f
    )


def area_functional(bd: BData, p: Profile, prm: Params, rho: float) -> float:
    r = bd.invert(rho)
    state = radial_state(p, bd, r)
    return float(np.exp((1.0 - prm.l) * math.log(rho) + _log_area_aggregate(bd, state, prm.beta)))


def _area_and_derivative(bd: BData, p: Profile, prm: Params, rho: np.ndarray, r: np.ndarray):
    state = radial_state(p, bd, np.asarray(r, dtype=float))
    log_phi_agg = _log_area_aggregate(bd, state, prm.beta)
    log_rho = np.log(rho)
    A = np.exp((1.0 - prm.l) * log_rho + log_phi_agg)
    # dA/drho = rho^{-l} * Phi * [(1-l) + (Phi'/Phi) / (b'/b)]
    ratio = state.d2b / state.db
    dlog_phi_agg = (state.n - 1.0) * state.dphi / state.phi + (prm.beta + 1.0) * ratio - state.df
    dlog_b = np.atleast_1d(bd.dlog_b(np.asarray(r, dtype=float)))
    dA = np.exp(-prm.l * log_rho + log_phi_agg) * ((1.0 - prm.l) + dlog_phi_agg / dlog_b)
    return A, dA


# -- volume and bulk integrands ---------------------------------------------


def _state_on(p: Profile, bd: BData, s: np.ndarray) -> RadialState:
    return radial_state(p, bd, np.asarray(s, dtype=float))


def _volume_integrand(p: Profile, bd: BData, prm: Params):
    def F(s):
        st = _state_on(p, bd, s)
        return st.db ** (2.0 + prm.beta) * st.b ** (-prm.p) * np.exp(-st.f) * st.phi ** (
            p.n - 1.0
        )

    return F


def _term_arrays(state: RadialState, prm: Params, mask, db4_coeff: float):
    pq = point_quantities(state)
    wf = state.w_prime * state.df
    db2 = state.db * state.db
    out = 0.0
    for key in mask:
        if key == "hess_b2_sq":
            out = out + pq.hess_b2_sq
        elif key == "B_sq":
            out = out + pq.B_sq
        elif key == "ricf_grad":
            out = out + pq.ricf_grad
        elif key == "grad_grad":
            out = out + 4.0 * (prm.beta - 2.0) * state.b * state.b * pq.grad_grad_b_sq
        elif key == "db4":
            out = out + db4_coeff * db2 * db2
        elif key == "grad_f_cross":
            out = out + 4.0 * db2 * wf
        elif key == "grad_f_sq":
            out = out + wf * wf / state.n
        else:
            raise ValueError(f"unknown bulk term '{key}'")
    return out


def _bulk_integrand(p: Profile, bd: BData, prm: Params, mask, db4_coeff: float, weight_exp: float):
    """(beta/4) db^{beta-2} b^{weight_exp} * sum(terms) * e^{-f} phi^{n-1}."""

    def F(s):
        st = _state_on(p, bd, s)
        terms = _term_arrays(st, prm, mask, db4_coeff)
        return (
            (prm.beta / 4.0)
            * st.db ** (prm.beta - 2.0)
            * st.b**weight_exp
            * terms
            * np.exp(-st.f)
            * st.phi ** (p.n - 1.0)
        )

    return F


def _pole_exponent(n: int, prm: Params) -> float:
    # integrand ~ s^E near the pole; E = C(n,k,p)/(k-2) - 1
    return _C(n, prm.k, prm.p, prm.beta) / (prm.k - 2.0) - 1.0


def _term_pole_data(n: int, prm: Params, mask, db4_coeff: float):
    """Leading coefficient (without the common prefactor) and exponent offset per term."""
    m = (n - 2.0) / (prm.k - 2.0)
    coeff = 0.0
    min_offset = math.inf
    for key in mask:
        if key == "hess_b2_sq":
            coeff += 4.0 * m * m * ((2.0 * m - 1.0) ** 2 + (n - 1.0))
            min_offset = min(min_offset, 0.0)
        elif key == "B_sq":
            coeff += ((n - 1.0) / n) * 4.0 * m * m * (2.0 * m - 2.0) ** 2
            min_offset = min(min_offset, 0.0)
        elif key == "grad_grad":
            coeff += 4.0 * (prm.beta - 2.0) * m * m * (m - 1.0) ** 2
            min_offset = min(min_offset, 0.0)
        elif key == "db4":
            coeff += db4_coeff * m**4
            min_offset = min(min_offset, 0.0)
        elif key == "ricf_grad":
            min_offset = min(min_offset, 2.0)
        elif key == "grad_f_cross":
            min_offset = min(min_offset, 1.0)
        elif key == "grad_f_sq":
            min_offset = min(min_offset, 2.0)
        else:
            raise ValueError(f"unknown bulk term '{key}'")
    return coeff, min_offset


def _singular_head(F, chi0: float, E: float, r0: float, quad_tol: float) -> float:
    """int_0^{r0} F with F ~ chi0 s^E handled in closed form."""
    head = chi0 * r0 ** (E + 1.0) / (E + 1.0)
    s_lo = max(R_CACHE_MIN, 1e-8 * r0)

    def remainder(s):
        s = np.asarray(s, dtype=float)
        return F(s) - chi0 * s**E

    corr, _ = adaptive_integral(
        remainder,
        s_lo,
        r0,
        rel_tol=quad_tol,
        abs_tol=quad_tol * max(abs(head), 1e-300),
        breakpoints=log_breakpoints(s_lo, r0),
    )
    return head + corr


def _segment_cumsum(F, edges: np.ndarray, quad_tol: float) -> np.ndarray:
    """Cumulative integral of F along sorted edges; entry j is int over [edges[0], edges[j]]."""
    if len(edges) < 2:
        return np.zeros(len(edges))
    vals, errs = panel_integrals(F, edges[:-1], edges[1:])
    scale = np.sum(np.abs(vals)) + 1e-300
    bad = errs > np.maximum(quad_tol * np.abs(vals), quad_tol * scale / len(vals))
    for j in np.nonzero(bad)[0]:
        vals[j], errs[j] = adaptive_integral(
            F, edges[j], edges[j + 1], rel_tol=quad_tol, abs_tol=quad_tol * scale
        )
    return np.concatenate([[0.0], np.cumsum(vals)])


def volume_functional(
    bd: BData, p: Profile, prm: Params, rho: float, quad_tol: float = 1e-10
) -> float:
    adm = admissibility(p.n, prm)
    if adm.C_nkp <= 0.0:
        raise ValueError(
            f"volume functional diverges: C(n,k,p) = {adm.C_nkp:g} <= 0"
        )
    r = bd.invert(rho)
    m = (p.n - 2.0) / (prm.k - 2.0)
    chi0 = m ** (2.0 + prm.beta) * math.exp(-p.f_origin)
    E = _pole_exponent(p.n, prm)
    raw = _singular_head(_volume_integrand(p, bd, prm), chi0, E, r, quad_tol)
    return float(rho ** (prm.p - prm.l) * sphere_area(p.n) * raw)


def curve(bd: BData, p: Profile, prm: Params, rho_grid, quad_tol: float = 1e-10):
    """Evaluate A, V and their rho-derivatives along an increasing level grid.

    V uses one singular-head evaluation at the innermost radius plus
    cumulative segment quadrature outward; when C(n,k,p) <= 0 the volume
    columns are NaN (the integral diverges).
    """
    rho_arr = np.asarray(rho_grid, dtype=float)
    if rho_arr.ndim != 1 or len(rho_arr) == 0:
        raise ValueError("rho grid must be a nonempty 1-d array")
    if np.any(np.diff(rho_arr) <= 0.0):
        raise ValueError("rho grid must be strictly increasing")
    r_arr = bd.invert(rho_arr)
    A, dA = _area_and_derivative(bd, p, prm, rho_arr, r_arr)

    adm = admissibility(p.n, prm)
    if adm.C_nkp > 0.0:
        m = (p.n - 2.0) / (prm.k - 2.0)
        chi0 = m ** (2.0 + prm.beta) * math.exp(-p.f_origin)
        E = _pole_exponent(p.n, prm)
        F = _volume_integrand(p, bd, prm)
        head = _singular_head(F, chi0, E, float(r_arr[0]), quad_tol)
        raw = head + _segment_cumsum(F, r_arr, quad_tol)
        V = rho_arr ** (prm.p - prm.l) * sphere_area(p.n) * raw
        dV = ((prm.p - prm.l) * V + A) / rho_arr
    else:
        V = np.full_like(rho_arr, math.nan)
        dV = np.full_like(rho_arr, math.nan)

    return [
        CurvePoint(float(rho_arr[i]), float(r_arr[i]), float(A[i]), float(V[i]), float(dA[i]), float(dV[i]))
        for i in range(len(rho_arr))
    ]


def default_rho_grid(bd: BData, size: int = 256) -> np.ndarray:
    """Log-spaced level grid spanning [b(1e-3), b(0.8 r_max)]."""
    lo = bd.b(1e-3)
    hi = bd.b(0.8 * bd.profile.r_max)
    return np.geomspace(lo, hi, size)


def small_r_limits(n: int, prm: Params, f_origin: float = 0.0) -> dict[str, TaggedLimit]:
    """Limits of A and V as the level goes to zero, by the sign of C(n,k,l).

    The V entry is undefined when C(n,k,p) <= 0 (V itself diverges).
    """
    adm = admissibility(n, prm)
    m = (n - 2.0) / (prm.k - 2.0)
    a_const = m ** (1.0 + prm.beta) * sphere_area(n) * math.exp(-f_origin)
    if adm.C_nkl > 0.0:
        a_lim = TaggedLimit("zero", 0.0)
    elif adm.C_nkl == 0.0:
        a_lim = TaggedLimit("finite", a_const)
    else:
        a_lim = TaggedLimit("infinite", math.inf)
    if adm.C_nkp <= 0.0:
        v_lim = TaggedLimit("undefined")
    elif adm.C_nkl > 0.0:
        v_lim = TaggedLimit("zero", 0.0)
    elif adm.C_nkl == 0.0:
        v_lim = TaggedLimit("finite", a_const * (n - 2.0) / adm.C_nkp)
    else:
        v_lim = TaggedLimit("infinite", math.inf)
    return {"A_limit": a_lim, "V_limit": v_lim}


def h_invariant(bd: BData, p: Profile, rho: float) -> float:
    """rho^{1-k} * omega * phi^{n-1} * b' * e^{-f}; constant in rho by construction."""
    r = bd.invert(rho)
    state = radial_state(p, bd, r)
    log_val = (
        (1.0 - bd.k) * math.log(rho)
        + math.log(sphere_area(p.n))
        + (p.n - 1.0) * np.log(state.phi)
        + np.log(state.db)
        - state.f
    )
    return float(np.exp(log_val))


def bulk_integral(
    bd: BData,
    p: Profile,
    prm: Params,
    rho: float,
    term_mask,
    quad_tol: float = 1e-10,
    db4_coeff: float | None = None,
) -> float:
    """rho^{p-1-l} * omega * int_0^{r(rho)} of the masked bulk integrand.

    db4_coeff overrides the coefficient of the |grad b|^4 term (default -4k).
    Raises when the masked combination is non-integrable at the pole.
    """
    vals = bulk_integral_grid(bd, p, prm, np.asarray([rho]), term_mask, quad_tol, db4_coeff)
    return float(vals[0])


def bulk_integral_grid(
    bd: BData,
    p: Profile,
    prm: Params,
    rho_grid,
    term_mask,
    quad_tol: float = 1e-10,
    db4_coeff: float | None = None,
) -> np.ndarray:
    """Vector bulk_integral along an increasing level grid (shared quadrature)."""
    mask = tuple(term_mask)
    coeff = -4.0 * prm.k if db4_coeff is None else float(db4_coeff)
    rho_arr = np.asarray(rho_grid, dtype=float)
    if np.any(np.diff(rho_arr) <= 0.0):
        raise ValueError("rho grid must be strictly increasing")
    n = p.n
    E = _pole_exponent(n, prm)
    tau0, offset = _term_pole_data(n, prm, mask, coeff)
    # integrability at the pole: leading terms need E > -1, the curvature and
    # weight couplings enter at E + offset
    critical = E if tau0 != 0.0 or offset == 0.0 else E + offset
    if critical <= -1.0:
        raise ValueError("masked bulk integrand is not integrable at the pole")
    m = (n - 2.0) / (prm.k - 2.0)
    chi0 = (prm.beta / 4.0) * m ** (prm.beta - 2.0) * tau0 * math.exp(-p.f_origin)
    F = _bulk_integrand(p, bd, prm, mask, coeff, -prm.p)
    r_arr = np.atleast_1d(bd.invert(rho_arr))
    head = _singular_head(F, chi0, E, float(r_arr[0]), quad_tol)
    raw = head + _segment_cumsum(F, r_arr, quad_tol)
    return rho_arr ** (prm.p - 1.0 - prm.l) * sphere_area(n) * raw


def bulk_integral_between(
    bd: BData,
    p: Profile,
    prm: Params,
    rho1: float,
    rho2: float,
    term_mask,
    quad_tol: float = 1e-10,
    db4_coeff: float | None = None,
) -> float:
    """Two-level bulk term: omega * int_{r1}^{r2} with weight b^{c+d-l-1}.

    No level prefactor; used by the two-level identity where the db4
    coefficient is the third admissibility constant.
    """
    if not rho2 > rho1 > 0.0:
        raise ValueError("need 0 < rho1 < rho2")
    mask = tuple(term_mask)
    coeff = -4.0 * prm.k if db4_coeff is None else float(db4_coeff)
    r1 = bd.invert(rho1)
    r2 = bd.invert(rho2)
    F = _bulk_integrand(p, bd, prm, mask, coeff, prm.c + prm.d - prm.l - 1.0)
    val, _ = adaptive_integral(
        F, r1, r2, rel_tol=quad_tol, abs_tol=0.0, breakpoints=log_breakpoints(r1, r2)
    )
    return float(sphere_area(p.n) * val)


def slope_integral_between(
    bd: BData, p: Profile, prm: Params, rho1: float, rho2: float, quad_tol: float = 1e-10
) -> float:
    """omega * int_{r1}^{r2} b^{c+d-l} <grad b, grad |grad b|^beta> e^{-f} dA-density.

    Radially the pairing is beta * db^beta * d2b.
    """
    if not rho2 > rho1 > 0.0:
        raise ValueError("need 0 < rho1 < rho2")
    r1 = bd.invert(rho1)
    r2 = bd.invert(rho2)
    expo = prm.c + prm.d - prm.l

    def F(s):
        st = _state_on(p, bd, s)
        return (
            prm.beta
            * st.db**prm.beta
            * st.d2b
            * st.b**expo
            * np.exp(-st.f)
            * st.phi ** (p.n - 1.0)
        )

    val, _ = adaptive_integral(
        F, r1, r2, rel_tol=quad_tol, abs_tol=0.0, breakpoints=log_breakpoints(r1, r2)
    )
    return float(sphere_area(p.n) * val)
