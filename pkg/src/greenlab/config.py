"""INI run configuration: profile, functional parameters, numeric settings.

Sections:

    [profile]   builtin = euclidean            # or an explicit profile:
                n = 3
                phi = "r/sqrt(1+r)"
                f = "1-sqrt(1+r^2)"
                r_max = 50
                phi_growth = 0.5
                f_slope = -1.0
                weight_slope = 0.5             # builtin override only

    [params]    k, l, beta, p, N, alpha, c, d  # N accepts "inf"

    [numeric]   quad_tol, grid_size, identity_tol, monotone_tol, curvature_tol

Expressions are written in double quotes.  Missing sections fall back to the
euclidean profile in dimension 3 with k = l = n, beta = 2.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import os
from dataclasses import dataclass, field

from .exprcalc import ParseError
from .functionals import Params
from .profile import BUILTIN_PROFILES, Profile, TailModel, builtin_profile
from .reporting import NumericConfig

__all__ = ["ConfigError", "RunConfig", "load_config", "default_run_config"]


class ConfigError(Exception):
    """Invalid or unreadable run configuration."""


@dataclass
class RunConfig:
    profile: Profile
    params: Params
    numeric: NumericConfig = field(default_factory=NumericConfig)


def default_run_config(n: int = 3) -> RunConfig:
    profile = builtin_profile("euclidean", n=n)
    nf = float(n)
    return RunConfig(profile=profile, params=Params(k=nf, l=nf, beta=2.0))


def _strip_quotes(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def _get_float(section, key: str, fallback: float) -> float:
    raw = section.get(key, None)
    if raw is None or raw.strip() == "":
        return fallback
    try:
        return float(_strip_quotes(raw))
    except ValueError as exc:
        raise ConfigError(f"bad numeric value for '{key}': {raw!r}") from exc


def _parse_profile(section) -> Profile:
    builtin = section.get("builtin", "").strip() if section else ""
    if section is None:
        return builtin_profile("euclidean", n=3)
    if builtin:
        if builtin not in BUILTIN_PROFILES:
            known = ", ".join(sorted(BUILTIN_PROFILES))
            raise ConfigError(f"unknown builtin profile '{builtin}' (known: {known})")
        n = int(_get_float(section, "n", 3))
        r_max = section.get("r_max", None)
        kwargs = {"n": n}
        if r_max is not None and r_max.strip():
            kwargs["r_max"] = _get_float(section, "r_max", 0.0)
        if "weight_slope" in section:
            kwargs["weight_slope"] = _get_float(section, "weight_slope", 0.5)
        return builtin_profile(builtin, **kwargs)
    required = ("n", "phi", "f", "r_max", "phi_growth", "f_slope")
    missing = [key for key in required if key not in section]
    if missing:
        raise ConfigError(
            "explicit profile needs keys "
            + ", ".join(required)
            + "; missing: "
            + ", ".join(missing)
        )
    try:
        return Profile(
            n=int(_get_float(section, "n", 3)),
            phi=_strip_quotes(section["phi"]),
            f=_strip_quotes(section["f"]),
            r_max=_get_float(section, "r_max", 0.0),
            tail=TailModel(
                phi_growth_exponent=_get_float(section, "phi_growth", 1.0),
                f_slope=_get_float(section, "f_slope", 0.0),
            ),
        )
    except (ParseError, ValueError) as exc:
        raise ConfigError(f"invalid profile: {exc}") from exc


def _parse_params(section, n: int) -> Params:
    nf = float(n)
    if section is None:
        return Params(k=nf, l=nf, beta=2.0)
    k = _get_float(section, "k", nf)
    l_val = _get_float(section, "l", k)
    beta = _get_float(section, "beta", 2.0)
    p = _get_float(section, "p", 0.0)
    raw_n = section.get("N", "inf").strip().lower()
    if raw_n in ("inf", "infinity", ""):
        big_n = math.inf
    else:
        try:
            big_n = float(raw_n)
        except ValueError as exc:
            raise ConfigError(f"bad value for N: {raw_n!r}") from exc
    alpha_raw = section.get("alpha", "").strip()
    alpha = None if alpha_raw == "" else _get_float(section, "alpha", 0.0)
    try:
        return Params(
            k=k,
            l=l_val,
            beta=beta,
            p=p,
            N=big_n,
            alpha=alpha,
            c=_get_float(section, "c", 0.0),
            d=_get_float(section, "d", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid params: {exc}") from exc


def _parse_numeric(section) -> NumericConfig:
    if section is None:
        return NumericConfig()
    try:
        return NumericConfig(
            quad_tol=_get_float(section, "quad_tol", 1e-10),
            grid_size=int(_get_float(section, "grid_size", 256)),
            identity_tol=_get_float(section, "identity_tol", 1e-6),
            monotone_tol=_get_float(section, "monotone_tol", 1e-8),
            curvature_tol=_get_float(section, "curvature_tol", 1e-9),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid numeric settings: {exc}") from exc


def load_config(path: str | None, n: int | None = None) -> RunConfig:
    """Read a RunConfig from an INI file; None loads the defaults.

    ``n`` overrides the dimension: without a config file it selects the
    flat-space defaults in that dimension, otherwise it replaces the
    profile dimension from the file.
    """
    if n is not None and n < 3:
        raise ConfigError("dimension must satisfy n >= 3")
    if path is None:
        return default_run_config(3 if n is None else n)
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if not read:
        raise ConfigError(f"cannot read config file: {path}")
    profile = _parse_profile(parser["profile"] if parser.has_section("profile") else None)
    if n is not None and n != profile.n:
        profile = dataclasses.replace(profile, n=int(n))
    params = _parse_params(
        parser["params"] if parser.has_section("params") else None, profile.n
    )
    numeric = _parse_numeric(
        parser["numeric"] if parser.has_section("numeric") else None
    )
    return RunConfig(profile=profile, params=params, numeric=numeric)
