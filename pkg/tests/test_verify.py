import math
import types

import pytest

from atlascover.annulus import cover_annulus
from atlascover.core import (
    DiagonalAffineChart,
    Disconnected,
    InsufficientPoints,
    NoContainingChart,
    PuncturedPlane,
    RegionMismatch,
    UnknownBound,
    chart_contains,
)
from atlascover.core import Covering
from atlascover.polydisc import cover_punctured_polydisc
from atlascover.verify import (
    AnnulusRegion,
    PolydiscRegion,
    certify_doubling,
    chain_between,
    check_coverage,
    complexity_report,
    fit_log_exponent,
    intersection_witness,
    linear_fit,
    scaling_experiment,
)


class TestCoverage:
    def test_full_annulus_passes(self):
        cov = cover_annulus(0.1, 2.0)
        rep = check_coverage(cov, AnnulusRegion(0.1), n_samples=8000, seed=0)
        assert rep.passed and rep.rate == 1.0

    def test_deleting_first_chart_uncovers_its_private_region(self):
        cov = cover_annulus(0.1, 2.0)
        pruned = Covering(ambient=cov.ambient, gamma=cov.gamma,
                          charts=list(cov.charts)[1:], meta=cov.meta)
        rep = check_coverage(pruned, AnnulusRegion(0.1), n_samples=8000, seed=0)
        assert not rep.passed
        assert len(rep.uncovered) > 0

    def test_empty_region_passes_vacuously(self):
        cov = cover_annulus(1.0, 2.0)
        rep = check_coverage(cov, AnnulusRegion(1.0), n_samples=100, seed=0)
        assert rep.passed and rep.samples_total == 0

    def test_region_mismatch(self):
        cov = cover_annulus(0.1, 2.0)
        with pytest.raises(RegionMismatch):
            check_coverage(cov, PolydiscRegion(eta=0.1, n=2), 100, 0)

    def test_deterministic(self):
        cov = cover_annulus(0.05, 2.0)
        r1 = check_coverage(cov, AnnulusRegion(0.05), n_samples=4000, seed=42)
        r2 = check_coverage(cov, AnnulusRegion(0.05), n_samples=4000, seed=42)
        assert r1 == r2


class TestCertify:
    def test_hand_built_fat_disk_fails(self):
        ch = DiagonalAffineChart(b=(0.5,), d=(0.3,), gamma=2.0)
        cov = Covering(ambient=PuncturedPlane(), gamma=2.0, charts=[ch])
        rep = certify_doubling(cov)
        assert not rep.passed
        assert rep.failures == (0,)

    def test_annulus_all_pass(self):
        rep = certify_doubling(cover_annulus(0.01, 4.0))
        assert rep.passed


class TestChains:
    def test_two_points_in_one_chart(self):
        cov = cover_annulus(0.5, 2.0)
        ch = cov.charts[0]
        p = (ch.b[0],)
        q = (ch.b[0] + 0.5 * ch.d[0],)
        chain = chain_between(cov, p, q)
        assert chain.length == 1

    def test_antipodal_chain_has_valid_witnesses(self):
        cov = cover_annulus(0.01, 2.0)
        chain = chain_between(cov, (0.01,), (-0.01,))
        assert chain.length >= 2
        assert len(chain.witnesses) == chain.length - 1
        assert chart_contains(cov.charts[chain.chart_indices[0]], (0.01,), 1.0)
        assert chart_contains(cov.charts[chain.chart_indices[-1]], (-0.01,), 1.0)
        for (i, j), w in zip(zip(chain.chart_indices, chain.chart_indices[1:]),
                             chain.witnesses):
            assert chart_contains(cov.charts[i], w, 1.0)
            assert chart_contains(cov.charts[j], w, 1.0)

    def test_uncovered_endpoint(self):
        cov = cover_annulus(0.5, 2.0)
        with pytest.raises(NoContainingChart):
            chain_between(cov, (2.5,), (0.9,))

    def test_disconnected(self):
        charts = [DiagonalAffineChart(b=(0.9,), d=(0.01,), gamma=2.0),
                  DiagonalAffineChart(b=(-0.9,), d=(0.01,), gamma=2.0)]
        cov = Covering(ambient=PuncturedPlane(), gamma=2.0, charts=charts)
        with pytest.raises(Disconnected):
            chain_between(cov, (0.9,), (-0.9,))

    def test_chain_length_trend_across_deltas(self):
        lengths, logs = [], []
        for delta in (1e-1, 1e-2, 1e-3):
            cov = cover_annulus(delta, 2.0)
            lengths.append(chain_between(cov, (delta,), (-delta,)).length)
            logs.append(math.log(1.0 / delta))
        fit = linear_fit(logs, lengths)
        assert math.isfinite(fit.slope)
        assert fit.r2 >= 0.95


class TestWitness:
    def test_segment_witness_for_overlapping_disks(self):
        c1 = DiagonalAffineChart(b=(0.0,), d=(1.0,), gamma=2.0)
        c2 = DiagonalAffineChart(b=(1.5,), d=(1.0,), gamma=2.0)
        w = intersection_witness(c1, c2)
        assert w is not None
        assert chart_contains(c1, w, 1.0) and chart_contains(c2, w, 1.0)

    def test_no_witness_for_disjoint_disks(self):
        c1 = DiagonalAffineChart(b=(0.0,), d=(0.3,), gamma=2.0)
        c2 = DiagonalAffineChart(b=(1.5,), d=(0.3,), gamma=2.0)
        assert intersection_witness(c1, c2) is None


class TestComplexity:
    def test_annulus_instance(self):
        cov = cover_annulus(0.1, 2.0)
        rep = complexity_report(cov, "polydisc", n=1, gamma=2.0, eta=0.1)
        assert rep.bound == pytest.approx(18.0 * math.log(180.0), rel=1e-12)
        assert rep.ratio == cov.kappa / rep.bound

    def test_empty_ratio_zero(self):
        cov = cover_annulus(1.0, 2.0)
        rep = complexity_report(cov, "polydisc", n=1, gamma=2.0, eta=1.0)
        assert rep.ratio == 0.0

    def test_unknown_bound(self):
        cov = cover_annulus(0.5, 2.0)
        with pytest.raises(UnknownBound):
            complexity_report(cov, "mystery", n=1)

    def test_ratio_stability_one_dim(self):
        ratios = []
        for eta in (1e-1, 1e-2, 1e-3, 1e-4):
            cov = cover_annulus(eta, 2.0)
            rep = complexity_report(cov, "polydisc", n=1, gamma=2.0, eta=eta)
            ratios.append(rep.ratio)
        assert max(ratios) / min(ratios) < 2.0


class TestFits:
    def test_recovers_synthetic_exponent(self):
        for n in (1, 2, 3):
            rows = [types.SimpleNamespace(kappa=math.log(1.0 / d) ** n,
                                          log_inv_param=math.log(1.0 / d))
                    for d in (1e-1, 1e-2, 1e-3, 1e-4)]
            fit = fit_log_exponent(rows)
            assert abs(fit.slope - n) <= 1e-6
            assert fit.r2 >= 1.0 - 1e-12

    def test_constant_series_is_perfect_fit(self):
        fit = linear_fit([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)
        assert fit.r2 == 1.0

    def test_insufficient_points(self):
        with pytest.raises(InsufficientPoints):
            scaling_experiment("annulus", [0.1, 0.01], {"zeta": 2.0})
        with pytest.raises(InsufficientPoints):
            fit_log_exponent([])


class TestScaling:
    def test_annulus_rows(self):
        rows = scaling_experiment("annulus", [1e-1, 1e-2, 1e-3], {"zeta": 2.0})
        assert [r.kappa for r in rows] == [cover_annulus(d, 2.0).kappa
                                           for d in (1e-1, 1e-2, 1e-3)]
        assert all(r.paper_bound > 0 and r.ratio > 0 for r in rows)

    def test_polydisc_count_only_rows(self):
        rows = scaling_experiment("polydisc", [0.3, 0.1, 0.03],
                                  {"n": 2, "gamma": 2.0})
        fit = fit_log_exponent(rows)
        assert abs(fit.slope - 2.0) <= 0.3

    def test_grid_must_descend(self):
        with pytest.raises(ValueError):
            scaling_experiment("annulus", [0.01, 0.1, 0.001], {"zeta": 2.0})

    def test_unknown_experiment(self):
        with pytest.raises(ValueError):
            scaling_experiment("fractal", [0.1, 0.01, 0.001], {})


def test_polydisc_region_requires_matching_axes():
    cov, _ = cover_punctured_polydisc(2, 0.4, 2.0, active_axes={2})
    with pytest.raises(RegionMismatch):
        check_coverage(cov, PolydiscRegion(eta=0.4, n=2), 100, 0)
