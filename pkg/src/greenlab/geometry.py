"""Pointwise geometric quantities of radial functions in closed form.

For a radial function u on dr^2 + phi^2 g_{S^{n-1}} the Hessian has
eigenvalue u'' in the radial direction and u' phi'/phi with multiplicity
n-1, which turns every tensor norm used by the integral functionals into a
scalar formula in (b, b', b'', phi, phi', phi'', f', f'').  The drift
Laplacian of a radial v is v'' + ((n-1) phi'/phi - f') v'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exprcalc import Jet2, eval_jet2
from .green import BData
from .profile import Profile

__all__ = [
    "RadialState",
    "PointQuantities",
    "radial_state",
    "point_quantities",
    "delta_f_weighted",
    "f_laplacian_radial",
    "bochner_residual",
]


@dataclass(frozen=True)
class RadialState:
    """Samples of the profile and the level function at one or more radii.

    Fields accept scalars or aligned numpy arrays.
    """

    r: np.ndarray
    b: np.ndarray
    db: np.ndarray
    d2b: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    d2phi: np.ndarray
    f: np.ndarray
    df: np.ndarray
    d2f: np.ndarray
    n: int
    k: float

    @property
    def log_dphi(self):
        return self.dphi / self.phi

    @property
    def w_prime(self):
        """(b^2)' = 2 b b'."""
        return 2.0 * self.b * self.db

    @property
    def w_second(self):
        """(b^2)'' = 2 (b')^2 + 2 b b''."""
        return 2.0 * self.db * self.db + 2.0 * self.b * self.d2b


@dataclass(frozen=True)
class PointQuantities:
    """Closed-form tensor scalars at one state; see point_quantities."""

    hess_b2_sq: np.ndarray
    lap_b2: np.ndarray
    lapf_b2: np.ndarray
    ricf_grad: np.ndarray
    grad_grad_b_sq: np.ndarray
    B_sq: np.ndarray
    lam: np.ndarray
    B_nu_sq: np.ndarray


def _tail_jets(p: Profile, r: np.ndarray) -> tuple[Jet2, Jet2]:
    """Model continuation of (phi, f) beyond r_max."""
    rm = p.r_max
    a = p.tail.phi_growth_exponent
    sl = p.tail.f_slope
    phi_m = float(eval_jet2(p.phi, np.asarray([rm])).value[0])
    f_m = float(eval_jet2(p.f, np.asarray([rm])).value[0])
    phi = phi_m * (r / rm) ** a
    jet_phi = Jet2(phi, a * phi / r, a * (a - 1.0) * phi / (r * r))
    jet_f = Jet2(f_m + sl * (r - rm), np.full_like(r, sl), np.zeros_like(r))
    return jet_phi, jet_f


def radial_state(profile: Profile, bd: BData, r) -> RadialState:
    """Sample profile and level data at radii r (scalar or array).

    Radii beyond profile.r_max use the declared tail continuation, matching
    the Green's function cache.
    """
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr <= 0.0):
        raise ValueError("radial state requires r > 0")
    p = profile
    inside = r_arr <= p.r_max
    phi = np.empty_like(r_arr)
    dphi = np.empty_like(r_arr)
    d2phi = np.empty_like(r_arr)
    f = np.empty_like(r_arr)
    df = np.empty_like(r_arr)
    d2f = np.empty_like(r_arr)
    if inside.any():
        jp = eval_jet2(p.phi, r_arr[inside])
        jf = eval_jet2(p.f, r_arr[inside])
        phi[inside], dphi[inside], d2phi[inside] = jp.value, jp.d1, jp.d2
        f[inside], df[inside], d2f[inside] = jf.value, jf.d1, jf.d2
    beyond = ~inside
    if beyond.any():
        jp, jf = _tail_jets(p, r_arr[beyond])
        phi[beyond], dphi[beyond], d2phi[beyond] = jp.value, jp.d1, jp.d2
        f[beyond], df[beyond], d2f[beyond] = jf.value, jf.d1, jf.d2
    squeeze = np.isscalar(r) or (isinstance(r, np.ndarray) and r.ndim == 0)

    def _shape(x):
        return float(x[0]) if squeeze else x

    return RadialState(
        r=_shape(r_arr),
        b=_shape(np.atleast_1d(bd.b(r_arr))),
        db=_shape(np.atleast_1d(bd.db(r_arr))),
        d2b=_shape(np.atleast_1d(bd.d2b(r_arr))),
        phi=_shape(phi),
        dphi=_shape(dphi),
        d2phi=_shape(d2phi),
        f=_shape(f),
        df=_shape(df),
        d2f=_shape(d2f),
        n=p.n,
        k=bd.k,
    )


def point_quantities(s: RadialState) -> PointQuantities:
    """Tensor scalars for w = b^2: Hessian norm, Laplacians, trace-free part.

    lam is the tangential eigenvalue of the trace-free Hessian shifted by the
    drift term: lam = 2 db^2 - (Delta b^2)/n, so that the radial trace-free
    eigenvalue is lam + 2 b b''.
    """
    n = s.n
    wp = s.w_prime
    ws = s.w_second
    lphi = s.log_dphi
    hess_b2_sq = ws * ws + (n - 1.0) * (wp * lphi) ** 2
    lap_b2 = ws + (n - 1.0) * wp * lphi
    lapf_b2 = lap_b2 - s.df * wp
    ricf_grad = wp * wp * (s.d2f - (n - 1.0) * s.d2phi / s.phi)
    grad_grad_b_sq = s.d2b * s.d2b
    lam = 2.0 * s.db * s.db - lap_b2 / n
    B_sq = ((n - 1.0) / n) * (ws - wp * lphi) ** 2
    B_nu_sq = 4.0 * s.b * s.b * grad_grad_b_sq + lam * lam + 4.0 * lam * s.b * s.d2b
    return PointQuantities(
        hess_b2_sq=hess_b2_sq,
        lap_b2=lap_b2,
        lapf_b2=lapf_b2,
        ricf_grad=ricf_grad,
        grad_grad_b_sq=grad_grad_b_sq,
        B_sq=B_sq,
        lam=lam,
        B_nu_sq=B_nu_sq,
    )


def delta_f_weighted(s: RadialState, q: float, beta: float):
    """Drift Laplacian of b^{2q} |grad b|^beta in closed form.

    Assembled from the pointwise quantities; the q-dependent cross term
    carries the 8q/beta coefficient, so beta = 0 is only legal with q = 0
    (where the whole expression vanishes).
    """
    if beta == 0.0:
        if q != 0.0:
            raise ValueError("beta = 0 with q != 0 is not defined by this expansion")
        return np.zeros_like(np.asarray(s.r, dtype=float)) if np.ndim(s.r) else 0.0
    pq = point_quantities(s)
    k = s.k
    db2 = s.db * s.db
    mixed = 4.0 * s.b * db2 * s.d2b  # <grad b^2, grad |grad b|^2>
    db4 = db2 * db2
    bracket = (
        pq.hess_b2_sq
        + pq.ricf_grad
        + 2.0 * (k - 2.0 + 2.0 * q) * mixed
        + 4.0 * (beta - 2.0) * s.b * s.b * pq.grad_grad_b_sq
        + ((8.0 * q / beta) * (k - 2.0 + 2.0 * q) - 4.0 * k) * db4
    )
    return (beta / 4.0) * s.b ** (2.0 * q - 2.0) * s.db ** (beta - 2.0) * bracket


def f_laplacian_radial(s: RadialState, dv, d2v):
    """Drift Laplacian of a radial function from its first two derivatives."""
    return d2v + ((s.n - 1.0) * s.log_dphi - s.df) * dv


def bochner_residual(s: RadialState, u) -> float:
    """Defect of the weighted Bochner formula for a radial test function.

    u is a callable r -> (value, d1, d2); the third derivative is one
    central finite difference of d2 with step 1e-5.  Each side of

        1/2 Delta_f |grad u|^2 = |Hess u|^2 + <grad u, grad Delta_f u>
                                 + Ric_f(grad u, grad u)

    is assembled independently; the return value is the residual of the
    formula, normalized by the largest term magnitude.
    """
    r = np.asarray(s.r, dtype=float)
    _, du, d2u = _as_triple(u(r))
    h = 1e-5
    _, _, d2_hi = _as_triple(u(r + h))
    _, _, d2_lo = _as_triple(u(r - h))
    d3u = (d2_hi - d2_lo) / (2.0 * h)

    lphi = s.log_dphi
    drift = (s.n - 1.0) * lphi - s.df
    half_lap_grad = d2u * d2u + du * d3u + drift * du * d2u
    hess_sq = d2u * d2u + (s.n - 1.0) * (du * lphi) ** 2
    dlap_u = d3u + drift * d2u + ((s.n - 1.0) * (s.d2phi / s.phi - lphi * lphi) - s.d2f) * du
    grad_dot = du * dlap_u
    ricf = du * du * (s.d2f - (s.n - 1.0) * s.d2phi / s.phi)
    residual = half_lap_grad - hess_sq - grad_dot - ricf
    scale = np.maximum.reduce(
        [np.abs(half_lap_grad), np.abs(hess_sq), np.abs(grad_dot), np.abs(ricf)]
    )
    scale = np.maximum(scale, 1e-30)
    out = residual / scale
    return float(np.max(np.abs(out))) if np.ndim(out) else float(abs(out))


def _as_triple(val):
    if isinstance(val, Jet2):
        return val.value, val.d1, val.d2
    v, d1, d2 = val
    return np.asarray(v, float), np.asarray(d1, float), np.asarray(d2, float)
