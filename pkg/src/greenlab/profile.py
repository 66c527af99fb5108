"""Rotationally symmetric weighted-manifold profiles.

A profile is the triple (dimension n, warping function phi, potential f)
on the radial interval (0, r_max], together with a power-law/linear tail
model describing phi and f beyond r_max.  The metric is
``dr^2 + phi(r)^2 g_sphere`` and the measure carries the density
``exp(-f)``.  Radial curvature data, including the dimension-family
generalization with parameter N, comes out of the phi/f jets in closed
form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exprcalc import DomainError, Expr, Jet2, eval_jet2, parse_expression, to_source

__all__ = [
    "TailModel",
    "Profile",
    "CurvatureSample",
    "BUILTIN_PROFILES",
    "builtin_profile",
    "validate_profile",
    "ricci_f_radial",
    "check_curvature_nonneg",
]


@dataclass(frozen=True)
class TailModel:
    """Behaviour beyond r_max: phi ~ r**a and f ~ slope*r."""

    phi_growth_exponent: float
    f_slope: float

    def integrable_at_infinity(self, n: int) -> bool:
        """Whether exp(f) * phi**(1-n) has a finite integral to infinity."""
        if self.f_slope < 0.0:
            return True
        if self.f_slope == 0.0:
            return self.phi_growth_exponent * (n - 1) > 1.0
        return False


@dataclass(frozen=True)
class Profile:
    n: int
    phi: Expr
    f: Expr
    r_max: float
    tail: TailModel

    def phi_jet(self, r) -> Jet2:
        return eval_jet2(self.phi, r)

    def f_jet(self, r) -> Jet2:
        return eval_jet2(self.f, r)

    @property
    def phi_source(self) -> str:
        return to_source(self.phi)

    @property
    def f_source(self) -> str:
        return to_source(self.f)

    @property
    def f_origin(self) -> float:
        """Potential at the pole, f(0)."""
        return float(self.f_jet(0.0).value)


BUILTIN_PROFILES = {
    "bryant_surrogate": "square-root warping with asymptotically linear decreasing potential",
    "euclidean": "flat space, zero potential",
    "euclidean_weighted_linear": "flat space with a smoothed linear decreasing potential",
}


def builtin_profile(
    name: str, n: int = 3, r_max: float | None = None, weight_slope: float = 0.5
) -> Profile:
    """Construct one of the built-in profiles.

    ``weight_slope`` sets the asymptotic decay rate a > 0 of the potential
    of ``euclidean_weighted_linear`` (f ~ -a*r at infinity).
    """
    if name == "euclidean":
        return Profile(
            n=n,
            phi=parse_expression("r"),
            f=parse_expression("0"),
            r_max=20.0 if r_max is None else float(r_max),
            tail=TailModel(1.0, 0.0),
        )
    if name == "euclidean_weighted_linear":
        if not weight_slope > 0.0:
            raise ValueError("weight_slope must be positive")
        return Profile(
            n=n,
            phi=parse_expression("r"),
            f=parse_expression(f"-{weight_slope!r}*(sqrt(1+r^2)-1)"),
            r_max=20.0 if r_max is None else float(r_max),
            tail=TailModel(1.0, -float(weight_slope)),
        )
    if name == "bryant_surrogate":
        return Profile(
            n=n,
            phi=parse_expression("r/sqrt(1+r)"),
            f=parse_expression("1-sqrt(1+r^2)"),
            r_max=50.0 if r_max is None else float(r_max),
            tail=TailModel(0.5, -1.0),
        )
    raise ValueError(f"unknown builtin profile '{name}'")


def validate_profile(p: Profile, grid_size: int = 1024) -> list[str]:
    """Diagnostics for a profile; empty list means usable.

    Checks the pole normalization phi(0)=0, phi'(0)=1, positivity of phi,
    finiteness of f on [0, r_max], and integrability of the tail model.
    """
    issues: list[str] = []
    if int(p.n) != p.n or p.n < 3:
        issues.append(f"dimension n must be an integer >= 3, got {p.n}")
    if not (p.r_max > 0.0 and math.isfinite(p.r_max)):
        issues.append(f"r_max must be positive and finite, got {p.r_max}")
        return issues

    try:
        h = 1e-6
        jp = p.phi_jet(h)
        # Taylor step back to 0 removes the O(h) offset of sampling at h.
        phi0 = float(jp.value - h * jp.d1 + 0.5 * h * h * jp.d2)
        # Richardson in h removes the phi''(0) term from phi'(h).
        dphi0 = float(2.0 * p.phi_jet(h).d1 - p.phi_jet(2.0 * h).d1)
        if abs(phi0) > 1e-8:
            issues.append(f"phi(0) = {phi0:.3e}, expected 0")
        if abs(dphi0 - 1.0) > 1e-8:
            issues.append(f"phi'(0) = {dphi0:.10f}, expected 1")
    except DomainError as exc:
        issues.append(f"phi undefined near 0: {exc}")

    grid = np.geomspace(1e-6, p.r_max, grid_size)
    try:
        phi_vals = p.phi_jet(grid).value
        if np.any(phi_vals <= 0.0):
            bad = grid[np.argmax(phi_vals <= 0.0)]
            issues.append(f"phi not positive at r = {bad:.6g}")
        if not np.all(np.isfinite(phi_vals)):
            issues.append("phi not finite on (0, r_max]")
    except DomainError as exc:
        issues.append(f"phi undefined on (0, r_max]: {exc}")
    try:
        f_vals = p.f_jet(np.concatenate([[0.0], grid])).value
        if not np.all(np.isfinite(f_vals)):
            issues.append("f not finite on [0, r_max]")
    except DomainError as exc:
        issues.append(f"f undefined on [0, r_max]: {exc}")

    if not p.tail.integrable_at_infinity(p.n):
        issues.append(
            "tail model not integrable at infinity: needs f_slope < 0, or "
            "f_slope = 0 with phi_growth_exponent*(n-1) > 1"
        )
    return issues


@dataclass(frozen=True)
class CurvatureSample:
    r: float
    ric_rr: float
    ric_tt: float

    @property
    def min_eig(self) -> float:
        return min(self.ric_rr, self.ric_tt)


def _check_f_constant(p: Profile) -> None:
    probe = np.geomspace(1e-3, p.r_max, 16)
    jf = p.f_jet(probe)
    scale = 1.0 + np.max(np.abs(jf.value))
    if np.max(np.abs(jf.d1)) > 1e-12 * scale:
        raise ValueError("N = 0 requires a constant potential f")


def _ricci_arrays(p: Profile, N: float, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    jp = p.phi_jet(r)
    jf = p.f_jet(r)
    phi, dphi, d2phi = jp.value, jp.d1, jp.d2
    df, d2f = jf.d1, jf.d2
    ric_rr = -(p.n - 1) * d2phi / phi + d2f
    if N != math.inf and N != 0.0:
        ric_rr = ric_rr - df * df / N
    ric_tt = -d2phi / phi + (p.n - 2) * (1.0 - dphi * dphi) / (phi * phi) + df * dphi / phi
    return ric_rr, ric_tt


def ricci_f_radial(p: Profile, N: float, r: float) -> CurvatureSample:
    """Radial and tangential eigenvalues of the weighted Ricci tensor.

    ``N`` is the extra-dimension parameter: ``math.inf`` gives the plain
    weighted tensor Ric + Hess f, a finite N > 0 subtracts df x df / N,
    and N = 0 demands a constant potential (plain Ricci).
    """
    if N != math.inf:
        if N < 0.0:
            raise ValueError("N must be in (0, inf], or 0 with constant f")
        if N == 0.0:
            _check_f_constant(p)
    if not r > 0.0:
        raise ValueError("curvature sample requires r > 0")
    arr = np.asarray([float(r)])
    rr, tt = _ricci_arrays(p, N, arr)
    return CurvatureSample(float(r), float(rr[0]), float(tt[0]))


def check_curvature_nonneg(
    p: Profile, N: float, grid: Sequence[float] | np.ndarray, tolerance: float = 1e-9
) -> tuple[bool, float]:
    """Grid check of Ric >= 0 for the N-family tensor.

    Returns (ok, min eigenvalue over the grid); ok allows the slack
    ``-tolerance * (1 + |eig scale|)``.
    """
    if N != math.inf and N == 0.0:
        _check_f_constant(p)
    elif N != math.inf and N < 0.0:
        raise ValueError("N must be in (0, inf], or 0 with constant f")
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0.0) or np.any(grid > p.r_max):
        raise ValueError("curvature grid must lie in (0, r_max]")
    rr, tt = _ricci_arrays(p, N, grid)
    min_eig = float(min(np.min(rr), np.min(tt)))
    scale = float(max(np.max(np.abs(rr)), np.max(np.abs(tt)), 1.0))
    return min_eig >= -tolerance * scale, min_eig
