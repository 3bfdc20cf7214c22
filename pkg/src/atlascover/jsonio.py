"""Stable JSON serialization for coverings and real-chart atlases.

Files are bit-reproducible for fixed inputs: keys are emitted in a fixed
order and floats use the shortest round-trip representation, so loading a
file reproduces the covering field for field.
"""

from __future__ import annotations

import json

import numpy as np

from .core import (
    Covering,
    DiagonalAffineChart,
    MonomialLevelSet,
    PolydiscComplement,
    PuncturedPlane,
)
from .levelset import LevelBranchCharts, MonomialLevelChart
from .real_acharts import MonomialData, RealAChart

SCHEMA_VERSION = "1"


def _c2j(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _j2c(v) -> complex:
    return complex(v[0], v[1])


def ambient_to_dict(ambient) -> dict:
    if isinstance(ambient, PuncturedPlane):
        return {"kind": "punctured_plane"}
    if isinstance(ambient, PolydiscComplement):
        return {"kind": "polydisc_complement", "n": ambient.n,
                "active_axes": sorted(ambient.active_axes)}
    if isinstance(ambient, MonomialLevelSet):
        return {"kind": "monomial_level_set", "alpha": list(ambient.alpha),
                "c": _c2j(ambient.c)}
    raise TypeError(f"unknown ambient {ambient!r}")


def ambient_from_dict(d: dict):
    kind = d["kind"]
    if kind == "punctured_plane":
        return PuncturedPlane()
    if kind == "polydisc_complement":
        return PolydiscComplement(n=d["n"], active_axes=frozenset(d["active_axes"]))
    if kind == "monomial_level_set":
        return MonomialLevelSet(alpha=tuple(d["alpha"]), c=_j2c(d["c"]))
    raise ValueError(f"unknown ambient kind {kind!r}")


def chart_to_dict(chart) -> dict:
    if isinstance(chart, DiagonalAffineChart):
        return {"kind": "diag_affine",
                "b": [_c2j(v) for v in chart.b],
                "d": [_c2j(v) for v in chart.d]}
    if isinstance(chart, MonomialLevelChart):
        return {"kind": "level_branch",
                "b": [_c2j(v) for v in chart.base.b],
                "d": [_c2j(v) for v in chart.base.d],
                "branch": chart.branch,
                "alpha": list(chart.alpha),
                "c": _c2j(chart.c)}
    raise TypeError(f"unknown chart {chart!r}")


def chart_from_dict(d: dict, gamma: float):
    kind = d["kind"]
    if kind == "diag_affine":
        return DiagonalAffineChart(b=tuple(_j2c(v) for v in d["b"]),
                                   d=tuple(_j2c(v) for v in d["d"]),
                                   gamma=gamma)
    if kind == "level_branch":
        base = DiagonalAffineChart(b=tuple(_j2c(v) for v in d["b"]),
                                   d=tuple(_j2c(v) for v in d["d"]),
                                   gamma=gamma)
        return MonomialLevelChart(base=base, branch=d["branch"],
                                  alpha=tuple(d["alpha"]), c=_j2c(d["c"]))
    raise ValueError(f"unknown chart kind {kind!r}")


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def covering_to_dict(cov: Covering) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "ambient": ambient_to_dict(cov.ambient),
        "gamma": cov.gamma,
        "kappa": cov.kappa,
        "charts": [chart_to_dict(c) for c in cov.charts],
        "meta": _jsonable(cov.meta),
    }


def covering_from_dict(d: dict) -> Covering:
    gamma = float(d["gamma"])
    ambient = ambient_from_dict(d["ambient"])
    charts = [chart_from_dict(c, gamma) for c in d["charts"]]
    if isinstance(ambient, MonomialLevelSet) and charts:
        # rebuild the structured family so membership queries stay fast
        bases = [c.base for c in charts[:: ambient.alpha[0]]]
        base_cov = Covering(
            ambient=PolydiscComplement(
                n=ambient.dim - 1,
                active_axes=frozenset(range(1, ambient.dim))),
            gamma=gamma, charts=bases)
        charts = LevelBranchCharts(base_cov, ambient.alpha, ambient.c)
    cov = Covering(ambient=ambient, gamma=gamma, charts=charts,
                   meta=d.get("meta", {}))
    if cov.kappa != d.get("kappa", cov.kappa):
        raise ValueError("kappa field disagrees with the chart list")
    return cov


def dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def write_covering(cov: Covering, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(covering_to_dict(cov)))


def read_covering(path) -> Covering:
    with open(path) as fh:
        return covering_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# real-chart atlases
# ---------------------------------------------------------------------------

def achart_atlas_to_dict(charts: list, data: MonomialData, eps: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "real_achart_atlas",
        "mu": list(data.exponents),
        "coefficient": data.coefficient,
        "eps": float(eps),
        "c3": charts[0].c3 if charts else None,
        "count": len(charts),
        "charts": [{"y": list(c.y), "z0": list(c.z0)} for c in charts],
    }


def achart_atlas_from_dict(d: dict):
    data = MonomialData(coefficient=d["coefficient"], exponents=tuple(d["mu"]))
    charts = [RealAChart(y=tuple(c["y"]), z0=tuple(c["z0"]), c3=d["c3"], data=data)
              for c in d["charts"]]
    return charts, data, d["eps"]


def write_achart_atlas(charts, data, eps, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(achart_atlas_to_dict(charts, data, eps)))


def read_achart_atlas(path):
    with open(path) as fh:
        return achart_atlas_from_dict(json.load(fh))
