"""Seeded data-generating processes for the Monte Carlo power study.

Four processes over an n-units by m-periods panel:

* ``iid``         -- the null: every cell iid N(0, 1).
* ``ar1``         -- per-unit recursion x[t] = phi*x[t-1] + (1-phi)*eps[t]
                     started at x[1] = eps[1].  Implemented literally,
                     including the (1-phi) innovation weight and the
                     non-stationary start; no stationary-variance rescaling.
* ``linear_csd``  -- equicorrelated cross sections: for each period an
                     exact one-factor draw sqrt(rho)*g + sqrt(1-rho)*e,
                     whose population covariance has unit diagonal and rho
                     off-diagonal.
* ``nonmono``     -- iid base; the first ceil(n/2) units are overwritten
                     for t >= 2 by x[t] = sin(x[t-1]) + cos(x[t-1]**2)
                     + 0.5*eps_unit with one noise draw per unit, iterating
                     on already-updated values.  Remaining units keep the
                     base draw bitwise.

All generators are pure functions of (spec, stream); the caller supplies a
dedicated stream per replication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .ebr import ResidualMatrix

KINDS = ("iid", "ar1", "linear_csd", "nonmono")

# Fraction of units the non-monotonic transformation touches.
NONMONO_AFFECTED_FRACTION = 0.5


@dataclass(frozen=True)
class DgpSpec:
    """One data-generating process, optionally bound to a panel size."""

    kind: str
    phi: float | None = None
    rho: float | None = None
    affected_fraction: float = NONMONO_AFFECTED_FRACTION
    n_units: int | None = None
    m_periods: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown DGP kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "ar1":
            if self.phi is None or not 0.0 <= self.phi < 1.0:
                raise ValueError(f"ar1 requires phi in [0, 1), got {self.phi}")
        elif self.phi is not None:
            raise ValueError(f"phi is only valid for ar1, not {self.kind}")
        if self.kind == "linear_csd":
            if self.rho is None or not 0.0 <= self.rho < 1.0:
                raise ValueError(f"linear_csd requires rho in [0, 1), got {self.rho}")
        elif self.rho is not None:
            raise ValueError(f"rho is only valid for linear_csd, not {self.kind}")
        if self.affected_fraction != NONMONO_AFFECTED_FRACTION:
            raise ValueError("only affected_fraction = 0.5 is supported")
        for name in ("n_units", "m_periods"):
            value = getattr(self, name)
            if value is not None and value < 2:
                raise ValueError(f"{name} must be at least 2, got {value}")

    def with_shape(self, n: int, m: int) -> "DgpSpec":
        return replace(self, n_units=n, m_periods=m)

    def label(self) -> str:
        if self.kind == "ar1":
            return f"ar1(phi={self.phi:g})"
        if self.kind == "linear_csd":
            return f"linear_csd(rho={self.rho:g})"
        return self.kind

    @property
    def param_name(self) -> str | None:
        return {"ar1": "phi", "linear_csd": "rho"}.get(self.kind)

    @property
    def param_value(self) -> float | None:
        return self.phi if self.kind == "ar1" else self.rho


def gen_iid(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((n, m))


def gen_ar1(n: int, m: int, phi: float, rng: np.random.Generator) -> np.ndarray:
    eps = rng.standard_normal((n, m))
    x = np.empty_like(eps)
    x[:, 0] = eps[:, 0]
    for t in range(1, m):
        x[:, t] = phi * x[:, t - 1] + (1.0 - phi) * eps[:, t]
    return x


def gen_linear_csd(n: int, m: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal(m)
    e = rng.standard_normal((n, m))
    return math.sqrt(rho) * g[None, :] + math.sqrt(1.0 - rho) * e


def gen_nonmono(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    x = gen_iid(n, m, rng)
    n_sel = math.ceil(n * NONMONO_AFFECTED_FRACTION)
    eps = rng.standard_normal(n_sel)
    for t in range(1, m):
        prev = x[:n_sel, t - 1]
        x[:n_sel, t] = np.sin(prev) + np.cos(prev**2) + 0.5 * eps
    return x


def generate(spec: DgpSpec, rng: np.random.Generator) -> ResidualMatrix:
    """Draw one panel for a fully-specified DGP (shape must be bound)."""
    n, m = spec.n_units, spec.m_periods
    if n is None or m is None:
        raise ValueError("DgpSpec must have n_units and m_periods set; use with_shape()")
    if spec.kind == "iid":
        values = gen_iid(n, m, rng)
    elif spec.kind == "ar1":
        values = gen_ar1(n, m, spec.phi, rng)
    elif spec.kind == "linear_csd":
        values = gen_linear_csd(n, m, spec.rho, rng)
    else:
        values = gen_nonmono(n, m, rng)
    return ResidualMatrix(values, label=spec.label())
