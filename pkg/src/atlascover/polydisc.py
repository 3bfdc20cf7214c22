"""Coverings of the punctured polydisc Q_n^eta = {eta <= |x_i| <= 1 for all i}.

The construction is inductive in the dimension: level 1 is a Whitney-disk
covering of the annulus with factor gamma^n, and level l+1 suspends level l
over a fresh annulus covering with beta = gamma, trading the factor
gamma^(n-l+1) down to gamma^(n-l).  After n levels the covering has factor
exactly gamma and kappa equal to the product of the per-level annulus counts.

Axes that carry no puncture get a trivial single-layer level instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .annulus import _angular_count, _ring_count, cover_annulus, default_params
from .core import (
    Covering,
    DiagonalAffineChart,
    EtaParams,
    GammaTooSmall,
    NotARegularValue,
    PolydiscComplement,
)
from .suspension import layer_zeta, suspend_covering, suspend_trivial


@dataclass(frozen=True)
class LevelPlan:
    """One level of the induction: its factor budget and annulus size."""

    level: int
    axis_active: bool
    mu: float            # factor of the covering being extended (gamma^n at level 1)
    zeta: float          # doubling factor of the level's annulus disks (0 if trivial)
    annulus_count: int   # N_l, number of layer disks (1 if trivial)
    kappa: int           # chart count after this level


@dataclass(frozen=True)
class PolydiscCoveringPlan:
    """Per-level bookkeeping of the induction; kappa_final = prod of counts."""

    n: int
    eta: float
    gamma: float
    levels: tuple = field(default_factory=tuple)

    @property
    def per_level_zeta(self) -> list:
        return [lv.zeta for lv in self.levels]

    @property
    def per_level_count(self) -> list:
        return [lv.annulus_count for lv in self.levels]

    @property
    def kappa_final(self) -> int:
        k = 1
        for lv in self.levels:
            k *= lv.annulus_count
        return k if self.levels else 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eta": self.eta,
            "gamma": self.gamma,
            "levels": [
                {
                    "level": lv.level,
                    "axis_active": lv.axis_active,
                    "mu": lv.mu,
                    "zeta": lv.zeta,
                    "annulus_count": lv.annulus_count,
                    "kappa": lv.kappa,
                }
                for lv in self.levels
            ],
            "kappa": self.kappa_final,
        }


def _annulus_count(eta: float, zeta: float) -> int:
    params = default_params(zeta)
    q = params.ring_ratio
    return _ring_count(eta, q) * _angular_count(q, zeta, 1.0)


def _normalize_axes(n: int, active_axes) -> frozenset:
    if active_axes is None:
        return frozenset(range(1, n + 1))
    axes = frozenset(int(i) for i in active_axes)
    if not axes:
        raise ValueError("at least one axis must be punctured")
    if not all(1 <= i <= n for i in axes):
        raise ValueError(f"active axes must lie in 1..{n}")
    return axes


def polydisc_plan(n: int, eta: float, gamma: float,
                  active_axes=None) -> PolydiscCoveringPlan:
    """Count-only mode: the per-level annulus sizes without building charts."""
    if n < 1:
        raise ValueError("dimension must be positive")
    if not gamma >= 2.0:
        raise GammaTooSmall(f"the induction requires gamma >= 2, got {gamma}")
    axes = _normalize_axes(n, active_axes)
    if eta >= 1.0:
        return PolydiscCoveringPlan(n=n, eta=float(eta), gamma=float(gamma))
    levels = []
    kappa = 1
    for l in range(1, n + 1):
        active = l in axes
        if l == 1:
            # level 1 is its own base covering with factor gamma^n
            mu = gamma ** n
            zeta = gamma ** n if active else 0.0
        else:
            # the suspension producing level l extends the level-(l-1)
            # covering, whose factor is gamma^(n-l+2)
            mu = gamma ** (n - l + 2)
            zeta = layer_zeta(mu, gamma) if active else 0.0
        count = _annulus_count(eta, zeta) if active else 1
        kappa *= count
        levels.append(LevelPlan(level=l, axis_active=active, mu=mu,
                                zeta=zeta, annulus_count=count, kappa=kappa))
    return PolydiscCoveringPlan(n=n, eta=float(eta), gamma=float(gamma),
                                levels=tuple(levels))


def cover_punctured_polydisc(n: int, eta: float, gamma: float,
                             active_axes=None):
    """Build a gamma-doubling covering of Q_n^eta in C^n minus the punctured axes.

    Returns (covering, plan).  Level 1 covers the first axis with factor
    gamma^n; each later level suspends with beta = gamma.  eta >= 1 yields the
    empty covering.  Chart storage is lazy: kappa grows like the product of
    the per-level counts, but construction cost does not.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    if not gamma >= 2.0:
        raise GammaTooSmall(f"the induction requires gamma >= 2, got {gamma}")
    axes = _normalize_axes(n, active_axes)
    plan = polydisc_plan(n, eta, gamma, active_axes=axes)
    if eta >= 1.0:
        cov = Covering(
            ambient=PolydiscComplement(n=n, active_axes=axes),
            gamma=float(gamma), charts=[],
            meta={"construction": "punctured_polydisc", "eta": float(eta),
                  "n": n, "plan": plan.to_dict()})
        return cov, plan

    if 1 in axes:
        cov = cover_annulus(eta, gamma ** n)
    else:
        chart = DiagonalAffineChart(b=(0j,), d=(1.0 + 0j,), gamma=gamma ** n)
        cov = Covering(ambient=PolydiscComplement(n=1, active_axes=frozenset()),
                       gamma=gamma ** n, charts=[chart],
                       meta={"construction": "unpunctured_disc"})
    for l in range(2, n + 1):
        if l in axes:
            cov = suspend_covering(cov, delta=eta, beta=gamma)
        else:
            cov = suspend_trivial(cov, beta=gamma)

    ambient = PolydiscComplement(n=n, active_axes=axes)
    meta = {
        "construction": "punctured_polydisc",
        "eta": float(eta),
        "gamma": float(gamma),
        "n": n,
        "plan": plan.to_dict(),
    }
    cov = Covering(ambient=ambient, gamma=cov.gamma, charts=cov.charts, meta=meta)
    if abs(cov.gamma - gamma) > 1e-9:
        raise AssertionError("factor bookkeeping broke: final factor != gamma")
    return cov, plan


def eta_from_delta(delta: float, p: EtaParams) -> float:
    """Inner-radius parameter for a modulus tube: (c_lower * delta^d / C_unit)^(1/alpha0).

    Shrinking the polydisc by this eta guarantees the removed neighborhood of
    the coordinate cross lies inside the delta-tube of the zero set.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return (p.c_lower * delta ** p.d / p.C_unit) ** (1.0 / p.alpha0)


def level_lower_bound(c: complex, C_unit: float, alpha0: int) -> float:
    """Lower bound (|c| / C_unit)^(1/alpha0) on every coordinate along {x^alpha = c}.

    This is the eta of the base covering used for level hypersurfaces.
    """
    c = complex(c)
    if c == 0:
        raise NotARegularValue("0 is the singular value of a monomial")
    if not C_unit >= 1:
        raise ValueError("C_unit must be >= 1")
    if alpha0 < 1:
        raise ValueError("alpha0 must be a positive integer")
    return (abs(c) / C_unit) ** (1.0 / alpha0)


def polydisc_bound(n: int, gamma: float, eta: float) -> float:
    """Reference chart-count value (9 gamma^n)^n (log(9 gamma^n / eta))^n."""
    g = 9.0 * gamma ** n
    return g ** n * math.log(g / eta) ** n
