"""Weighted Green's function on a rotationally symmetric background.

With metric dr^2 + phi(r)^2 g_{S^{n-1}} and weight e^{-f}, the drift-harmonic
Green's function with pole at the origin, normalized to match r^{2-n} at the
pole, is

    G(r) = (n-2) * int_r^inf e^{f(s)-f(0)} phi(s)^{1-n} ds,

so that G' = -(n-2) e^{f-f(0)} phi^{1-n} exactly and the quotient
G''/G' = f' - (n-1) phi'/phi is available in closed form.  Everything
downstream (the level-set transform b = G^{1/(2-k)}, its derivatives, and all
integral functionals) is built on top of these closed forms; the only
numerical content is the single radial quadrature defining G itself.

The quadrature splits off the Euclidean singularity analytically:

    G(r) = [r^{2-n} - rmax^{2-n}] + (n-2) * int_r^rmax s^{1-n} (psi(s)-1) ds
           + G(rmax),
    psi(s) = e^{f(s)-f(0)} (phi(s)/s)^{1-n},

with the remainder integrand bounded near the pole.  Beyond rmax the profile
is continued by the declared tail model and the trailing integral is either a
closed-form power integral or a one-dimensional quadrature to infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .exprcalc import eval_jet2
from .profile import Profile, check_curvature_nonneg, validate_profile
from .quadrature import ConvergenceError, panel_integrals
from .reporting import CheckReport, HypothesisRecord

__all__ = [
    "GreenData",
    "BData",
    "ConvergenceError",
    "compute_green",
    "b_function",
    "invert_b",
    "check_pole_asymptotics",
    "check_gradient_bound",
]

# Cache extends down to this radius; below it the pole expansion
# G(r) = r^{2-n} + O(r^{3-n}) carries the evaluation.
R_CACHE_MIN = 1e-10


def _hermite_eval(xq, x, u, s, deriv=False):
    """Cubic Hermite interpolation with prescribed node slopes.

    x must be strictly increasing; xq is clipped to [x[0], x[-1]].
    Returns u(xq), or (u(xq), u'(xq)) when deriv is True.
    """
    xq = np.asarray(xq, dtype=float)
    idx = np.clip(np.searchsorted(x, xq, side="right") - 1, 0, len(x) - 2)
    h = x[idx + 1] - x[idx]
    t = np.clip((xq - x[idx]) / h, 0.0, 1.0)
    t2 = t * t
    t3 = t2 * t
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + t
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    val = h00 * u[idx] + h * (h10 * s[idx] + h11 * s[idx + 1]) + h01 * u[idx + 1]
    if not deriv:
        return val
    d00 = (6.0 * t2 - 6.0 * t) / h
    d10 = 3.0 * t2 - 4.0 * t + 1.0
    d01 = -d00
    d11 = 3.0 * t2 - 2.0 * t
    dval = d00 * u[idx] + d10 * s[idx] + d01 * u[idx + 1] + d11 * s[idx + 1]
    return val, dval


@dataclass
class GreenData:
    """Green's function cache for one profile.

    Holds log G sampled on a log-radius grid together with exact node slopes
    d(log G)/d(log r) = r G'/G; evaluation between nodes is cubic Hermite in
    those variables, which is exact for the flat profile (log G affine in
    log r) and O(h^4) otherwise.
    """

    profile: Profile
    grid_r: np.ndarray
    log_g: np.ndarray
    slope: np.ndarray
    tail_value: float
    quad_error: float
    _log_r: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self._log_r = np.log(self.grid_r)

    # -- profile samples with tail continuation ---------------------------

    def _split(self, r: np.ndarray):
        rmax = self.profile.r_max
        inside = r <= rmax
        return inside, ~inside

    def drift(self, r):
        """G''/G' = f' - (n-1) phi'/phi, continued by the tail model."""
        r = np.asarray(r, dtype=float)
        n = self.profile.n
        out = np.empty_like(r)
        inside, beyond = self._split(r)
        if inside.any():
            ri = r[inside]
            phi = eval_jet2(self.profile.phi, ri)
            f = eval_jet2(self.profile.f, ri)
            out[inside] = f.d1 - (n - 1) * phi.d1 / phi.value
        if beyond.any():
            rb = r[beyond]
            tail = self.profile.tail
            out[beyond] = tail.f_slope - (n - 1) * tail.phi_growth_exponent / rb
        return out

    def drift_derivative(self, r):
        """d/dr of G''/G' = f'' - (n-1)(phi''/phi - (phi'/phi)^2)."""
        r = np.asarray(r, dtype=float)
        n = self.profile.n
        out = np.empty_like(r)
        inside, beyond = self._split(r)
        if inside.any():
            ri = r[inside]
            phi = eval_jet2(self.profile.phi, ri)
            f = eval_jet2(self.profile.f, ri)
            lp = phi.d1 / phi.value
            out[inside] = f.d2 - (n - 1) * (phi.d2 / phi.value - lp * lp)
        if beyond.any():
            rb = r[beyond]
            a = self.profile.tail.phi_growth_exponent
            out[beyond] = (n - 1) * a / (rb * rb)
        return out

    def _log_weight(self, r):
        """log of e^{f-f(0)} phi^{1-n}, continued by the tail model."""
        r = np.asarray(r, dtype=float)
        n = self.profile.n
        p = self.profile
        out = np.empty_like(r)
        inside, beyond = self._split(r)
        if inside.any():
            ri = r[inside]
            phi = eval_jet2(p.phi, ri)
            f = eval_jet2(p.f, ri)
            out[inside] = (f.value - p.f_origin) + (1.0 - n) * np.log(phi.value)
        if beyond.any():
            rb = r[beyond]
            rm = p.r_max
            tail = p.tail
            phi_m = eval_jet2(p.phi, np.asarray([rm]))
            f_m = eval_jet2(p.f, np.asarray([rm]))
            log_e0 = (f_m.value[0] - p.f_origin) + (1.0 - n) * math.log(phi_m.value[0])
            out[beyond] = (
                log_e0
                + tail.f_slope * (rb - rm)
                + (1.0 - n) * tail.phi_growth_exponent * np.log(rb / rm)
            )
        return out

    # -- log G ------------------------------------------------------------

    def _log_tail(self, r):
        """log G(r) for r >= r_max from the tail model (stable for huge r)."""
        r = np.asarray(r, dtype=float)
        p = self.profile
        n, rm = p.n, p.r_max
        tail = p.tail
        nu = tail.phi_growth_exponent * (n - 1)
        phi_m = eval_jet2(p.phi, np.asarray([rm]))
        f_m = eval_jet2(p.f, np.asarray([rm]))
        log_e0 = (f_m.value[0] - p.f_origin) + (1.0 - n) * math.log(phi_m.value[0])
        base = math.log(n - 2.0) + log_e0
        if tail.f_slope == 0.0:
            # int_r^inf (s/rm)^{-nu} ds = rm/(nu-1) * (r/rm)^{1-nu}
            return base + math.log(rm / (nu - 1.0)) + (1.0 - nu) * np.log(r / rm)
        out = np.empty_like(r)
        sl = tail.f_slope
        for i, ri in enumerate(np.atleast_1d(r)):
            val, _ = integrate.quad(
                lambda s: math.exp(sl * (s - ri)) * (s / rm) ** (-nu),
                ri,
                np.inf,
                epsabs=0.0,
                epsrel=1e-13,
                limit=200,
            )
            out.flat[i] = base + sl * (ri - rm) + math.log(val)
        return out

    def log_G(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        if np.any(r <= 0.0) or not np.all(np.isfinite(r)):
            raise ValueError("radius must be positive and finite")
        out = np.empty_like(r)
        n = self.profile.n
        rmax = self.profile.r_max
        core = (r >= R_CACHE_MIN) & (r <= rmax)
        below = r < R_CACHE_MIN
        beyond = r > rmax
        if core.any():
            out[core] = _hermite_eval(np.log(r[core]), self._log_r, self.log_g, self.slope)
        if below.any():
            # G(r) = r^{2-n} - rlo^{2-n} + G(rlo) + (n-2) int_r^rlo s^{1-n}(psi-1) ds;
            # psi-1 = O(s) makes the correction integral O(rlo^{3-n}),
            # smaller than r^{2-n} by rlo^3/r-ish factors: drop it.
            rb = r[below]
            g_lo = math.exp(float(self.log_g[0]))
            out[below] = np.log(rb ** (2.0 - n) - R_CACHE_MIN ** (2.0 - n) + g_lo)
        if beyond.any():
            out[beyond] = self._log_tail(r[beyond])
        return float(out[0]) if scalar else out

    def G(self, r):
        return np.exp(self.log_G(r))

    def dlog_G(self, r):
        """G'/G, evaluated as -exp(log|G'| - log G) for stability."""
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        n = self.profile.n
        log_dg = math.log(n - 2.0) + self._log_weight(np.atleast_1d(r))
        out = -np.exp(log_dg - np.atleast_1d(self.log_G(r)))
        return float(out[0]) if scalar else out

    def dG(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        n = self.profile.n
        out = -(n - 2.0) * np.exp(self._log_weight(np.atleast_1d(r)))
        return float(out[0]) if scalar else out

    def d2G(self, r):
        return self.drift(r) * self.dG(r)


def _tail_integral(profile: Profile) -> float:
    """(n-2) int_{rmax}^inf of the tail-model weight."""
    p = profile
    n, rm = p.n, p.r_max
    tail = p.tail
    if not tail.integrable_at_infinity(n):
        raise ValueError("tail model is not integrable at infinity")
    nu = tail.phi_growth_exponent * (n - 1)
    phi_m = eval_jet2(p.phi, np.asarray([rm]))
    f_m = eval_jet2(p.f, np.asarray([rm]))
    e0 = math.exp((f_m.value[0] - p.f_origin) + (1.0 - n) * math.log(phi_m.value[0]))
    if tail.f_slope == 0.0:
        return (n - 2.0) * e0 * rm / (nu - 1.0)
    sl = tail.f_slope
    val, _ = integrate.quad(
        lambda s: math.exp(sl * (s - rm)) * (s / rm) ** (-nu),
        rm,
        np.inf,
        epsabs=0.0,
        epsrel=1e-13,
        limit=200,
    )
    return (n - 2.0) * e0 * val


def compute_green(profile: Profile, quad_tol: float = 1e-10, cache_size: int = 4096) -> GreenData:
    """Build the Green's function cache for a validated profile."""
    issues = validate_profile(profile)
    if issues:
        raise ValueError("profile failed validation: " + "; ".join(issues))
    p = profile
    n, rmax = p.n, p.r_max
    if cache_size < 16:
        raise ValueError("cache_size too small")

    r_nodes = np.geomspace(R_CACHE_MIN, rmax, cache_size)
    r_nodes[0], r_nodes[-1] = R_CACHE_MIN, rmax
    x_nodes = np.log(r_nodes)

    def psi_of(s):
        phi = eval_jet2(p.phi, s)
        f = eval_jet2(p.f, s)
        return np.exp(f.value - p.f_origin) * (phi.value / s) ** (1.0 - n)

    # Two formulations of int s^{1-n} psi ds in the log variable.  Near the
    # pole, subtracting the singular part keeps G - r^{2-n} at full absolute
    # precision (and makes flat space exact); once psi has decayed below 1/2
    # that split would cancel catastrophically, so the integrand is kept
    # whole there -- positive, so the suffix sums are monotone by construction.
    def split_integrand(t):
        s = np.exp(t)
        return s ** (2.0 - n) * (psi_of(s) - 1.0)

    def direct_integrand(t):
        s = np.exp(t)
        return s ** (2.0 - n) * psi_of(s)

    psi_nodes = psi_of(r_nodes)
    below = np.nonzero(psi_nodes < 0.5)[0]
    ic = int(below[0]) if len(below) else cache_size - 1

    vals = np.empty(cache_size - 1)
    errs = np.empty(cache_size - 1)
    is_split = np.zeros(cache_size - 1, dtype=bool)
    is_split[:ic] = True
    if ic > 0:
        vals[:ic], errs[:ic] = panel_integrals(
            split_integrand, x_nodes[:ic], x_nodes[1 : ic + 1]
        )
    if ic < cache_size - 1:
        vals[ic:], errs[ic:] = panel_integrals(
            direct_integrand, x_nodes[ic:-1], x_nodes[ic + 1 :]
        )

    tail = _tail_integral(p)

    def assemble():
        g = np.empty(cache_size)
        suffix_d = np.concatenate([np.cumsum(vals[ic:][::-1])[::-1], [0.0]])
        g[ic:] = (n - 2.0) * suffix_d + tail
        if ic > 0:
            suffix_s = np.concatenate([np.cumsum(vals[:ic][::-1])[::-1], [0.0]])
            g[:ic] = (
                r_nodes[:ic] ** (2.0 - n)
                - r_nodes[ic] ** (2.0 - n)
                + (n - 2.0) * suffix_s[:-1]
                + g[ic]
            )
        err_c = np.concatenate([np.cumsum(errs[::-1])[::-1], [0.0]])
        return g, err_c * (n - 2.0)

    g_vals, g_errs = assemble()

    allowed = quad_tol * g_vals[1:] / (n - 2.0) / 640.0
    bad = np.nonzero(errs > allowed)[0]
    if len(bad):
        from .quadrature import adaptive_integral

        for j in bad:
            fn = split_integrand if is_split[j] else direct_integrand
            try:
                vals[j], errs[j] = adaptive_integral(
                    fn,
                    x_nodes[j],
                    x_nodes[j + 1],
                    rel_tol=1e-13,
                    abs_tol=allowed[j] / 4.0,
                )
            except ConvergenceError:
                pass  # keep the panel estimate; the cumulative check decides
        g_vals, g_errs = assemble()

    if (g_errs > 10.0 * quad_tol * np.abs(g_vals)).any():
        raise ConvergenceError("Green's function quadrature failed to reach tolerance")
    if np.any(g_vals <= 0.0) or not np.all(np.isfinite(g_vals)):
        raise ConvergenceError("Green's function cache produced nonpositive values")
    if np.any(np.diff(g_vals) >= 0.0):
        raise ConvergenceError("Green's function cache is not strictly decreasing")

    phi = eval_jet2(p.phi, r_nodes)
    f = eval_jet2(p.f, r_nodes)
    log_w = (f.value - p.f_origin) + (1.0 - n) * np.log(phi.value)
    # node slopes d(log G)/d(log r) = r G'/G, with G' exact
    slopes = -(n - 2.0) * r_nodes * np.exp(log_w) / g_vals

    return GreenData(
        profile=p,
        grid_r=r_nodes,
        log_g=np.log(g_vals),
        slope=slopes,
        tail_value=tail,
        quad_error=float(g_errs[0]),
    )


@dataclass
class BData:
    """Level-set reparametrization b = G^{1/(2-k)} and its radial derivatives.

    All derivative quotients are closed forms in G'/G and the profile, so b,
    b', b'', b''' share a single source of quadrature error (the G cache) and
    every algebraic identity between them holds to interpolation accuracy.
    """

    green: GreenData
    k: float

    @property
    def profile(self) -> Profile:
        return self.green.profile

    @property
    def pole_exponent(self) -> float:
        """b ~ r^m at the pole with m = (n-2)/(k-2)."""
        return (self.profile.n - 2.0) / (self.k - 2.0)

    def log_b(self, r):
        return self.green.log_G(r) / (2.0 - self.k)

    def b(self, r):
        return np.exp(self.log_b(r))

    def dlog_b(self, r):
        return self.green.dlog_G(r) / (2.0 - self.k)

    def db(self, r):
        return self.b(r) * self.dlog_b(r)

    def curvature_ratio(self, r):
        """X = b''/b' = G''/G' + (k-1)/(2-k) * G'/G."""
        gp = self.green.dlog_G(r)
        return self.green.drift(r) + gp * (self.k - 1.0) / (2.0 - self.k)

    def d2b(self, r):
        return self.db(r) * self.curvature_ratio(r)

    def d3b(self, r):
        gp = self.green.dlog_G(r)
        ggp = self.green.drift(r)
        gp_prime = gp * (ggp - gp)
        x = ggp + gp * (self.k - 1.0) / (2.0 - self.k)
        x_prime = self.green.drift_derivative(r) + gp_prime * (self.k - 1.0) / (2.0 - self.k)
        return self.db(r) * (x * x + x_prime)

    # -- inversion ---------------------------------------------------------

    def invert(self, rho):
        """Radius r with b(r) = rho; accepts scalars or arrays."""
        rho_arr = np.asarray(rho, dtype=float)
        scalar = rho_arr.ndim == 0
        rho_arr = np.atleast_1d(rho_arr).astype(float)
        if np.any(rho_arr <= 0.0) or not np.all(np.isfinite(rho_arr)):
            raise ValueError("level value must be positive and finite")
        g = self.green
        u_target = (2.0 - self.k) * np.log(rho_arr)  # = log G at the sought radius
        u_nodes = g.log_g  # decreasing in r
        out = np.empty_like(rho_arr)

        below = u_target > u_nodes[0]
        beyond = u_target < u_nodes[-1]
        core = ~(below | beyond)
        if below.any():
            raise ValueError(
                f"level {rho_arr[below][0]:g} lies below the cached range; "
                f"smallest invertible level is {math.exp(u_nodes[0] / (2.0 - self.k)):g}"
            )
        if core.any():
            out[core] = self._invert_core(u_target[core])
        if beyond.any():
            out[beyond] = [self._invert_tail(u) for u in u_target[beyond]]
        return float(out[0]) if scalar else out

    def _invert_core(self, u_target: np.ndarray) -> np.ndarray:
        g = self.green
        x, u, s = g._log_r, g.log_g, g.slope
        # u is strictly decreasing; locate the segment containing each target
        idx = np.clip(len(u) - 1 - np.searchsorted(u[::-1], u_target, side="left"), 0, len(u) - 2)
        xq = x[idx] + (u[idx] - u_target) / (u[idx] - u[idx + 1]) * (x[idx + 1] - x[idx])
        for _ in range(40):
            val, dval = _hermite_eval(xq, x, u, s, deriv=True)
            step = (val - u_target) / dval
            xq = np.clip(xq - step, x[idx], x[idx + 1])
            if np.max(np.abs(step)) < 1e-15:
                break
        return np.exp(xq)

    def _invert_tail(self, u_target: float) -> float:
        g = self.green
        rmax = self.profile.r_max
        lo, hi = rmax, 2.0 * rmax
        for _ in range(200):
            if g.log_G(hi) <= u_target:
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise ValueError("level value exceeds the reachable range of b")
        return optimize.brentq(
            lambda r: g.log_G(r) - u_target, lo, hi, xtol=1e-13 * hi, rtol=8.9e-16
        )


def b_function(green: GreenData, k: float) -> BData:
    if not k > 2.0:
        raise ValueError("level exponent k must exceed 2")
    return BData(green=green, k=float(k))


def invert_b(bd: BData, rho):
    return bd.invert(rho)


def check_pole_asymptotics(bd: BData, radii=(1e-2, 1e-3, 1e-4)) -> CheckReport:
    """Verify b ~ r^m and b' ~ m r^{m-1} at the pole, m = (n-2)/(k-2)."""
    radii = np.asarray(sorted(radii, reverse=True), dtype=float)
    m = bd.pole_exponent
    log_b = np.atleast_1d(bd.log_b(radii))
    ratio_b = np.exp(log_b - m * np.log(radii))
    # b'/(m r^{m-1}) = (b/r^m) * (r b'/b)/m, using the stable log quotient
    ratio_db = ratio_b * radii * np.atleast_1d(bd.dlog_b(radii)) / m
    dev_b = np.abs(ratio_b - 1.0)
    dev_db = np.abs(ratio_db - 1.0)
    worst = float(max(dev_b[-1], dev_db[-1]))
    report = CheckReport(
        check_id="pole-asymptotics",
        description="b matches r^{(n-2)/(k-2)} at the pole",
        params={"k": bd.k, "n": bd.profile.n, "m": m},
        max_residual=worst,
        tolerance=1e-3,
        extras={
            "radii": [float(v) for v in radii],
            "b_over_rm": [float(v) for v in ratio_b],
            "db_over_mrm1": [float(v) for v in ratio_db],
        },
    )
    return report.finalize()


def check_gradient_bound(bd: BData, r0: float, grid: np.ndarray) -> CheckReport:
    """Check b(r) <= (2 r0^{n-k})^{1/(k-2)} r on grid points beyond r0.

    Valid under nonnegative N-curvature with N = k - n; both the curvature
    hypothesis and the integrality of the comparison are recorded.
    """
    p = bd.profile
    n, k = p.n, bd.k
    big_n = k - n
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("grid must be a nonempty 1-d array")
    if not (0.0 < r0 < p.r_max):
        raise ValueError("r0 must lie in (0, r_max)")

    hyps = [
        HypothesisRecord(
            name="dimension parameter nonnegative (k >= n)",
            ok=big_n >= 0.0,
            detail=f"N = k - n = {big_n:g}",
        )
    ]
    curv_grid = grid[(grid > 0.0) & (grid <= p.r_max)]
    if len(curv_grid) == 0:
        curv_grid = np.geomspace(1e-3 * p.r_max, p.r_max, 64)
    if big_n >= 0.0:
        try:
            ok, min_eig = check_curvature_nonneg(p, big_n, curv_grid)
            detail = f"min eigenvalue {min_eig:.3e} on {len(curv_grid)} radii"
        except ValueError as exc:
            ok, detail = False, str(exc)
        hyps.append(
            HypothesisRecord(name="nonnegative weighted curvature", ok=ok, detail=detail)
        )

    sel = grid[(grid >= r0) & (grid <= p.r_max)]
    if len(sel) == 0:
        raise ValueError("grid has no points in [r0, r_max]")
    b_vals = np.atleast_1d(bd.b(sel))
    db_vals = np.abs(np.atleast_1d(bd.db(sel)))
    bound_const = (2.0 * r0 ** (n - k)) ** (1.0 / (k - 2.0))
    margin = float(np.min(1.0 - b_vals / (bound_const * sel)))
    report = CheckReport(
        check_id="gradient-bound",
        description="linear upper barrier for b beyond a base radius",
        params={"k": k, "n": n, "r0": float(r0)},
        hypothesis_status=hyps,
        grid=sel,
        min_margin=margin,
        tolerance=1e-9,
        extras={
            "sup_grad_b": float(np.max(db_vals)),
            "sup_b_over_r": float(np.max(b_vals / sel)),
            "bound_const": float(bound_const),
        },
    )
    return report.finalize()
