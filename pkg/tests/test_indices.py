"""Catalog estimators and representations: worked values, invariances,
GPI instantiations and moment scores."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indexlaw.distributions import (EmpiricalDistribution, Exponential, LogNormal,
                                    Normal, Pareto, Uniform)
from indexlaw.empirical import build_sample, ecdf
from indexlaw.errors import (BadThreshold, OutOfRange, ThresholdOutsideSupport,
                             ZeroMean, ZeroVariance)
from indexlaw.indices import (GpiSpec, NamedIndex, central_moment_estimate,
                              fgt_estimate, gpi_constants, gpi_estimate,
                              gpi_representation, moment_representation,
                              named_estimate, named_representation,
                              normalized_moment_estimate)
from indexlaw.montecarlo import draw
from indexlaw.representation import index_variance
from indexlaw.rng import stream_seed

asarray = lambda x: np.asarray(x, dtype=float)


class TestFgt:
    def test_headcount(self):
        assert fgt_estimate(build_sample([1, 2, 3, 4]), 2.5, 0) == 0.5

    def test_gap(self):
        assert fgt_estimate(build_sample([1, 2, 3, 4]), 2.5, 1) == pytest.approx(0.2, abs=1e-15)

    def test_nobody_poor(self):
        assert fgt_estimate(build_sample([3, 4]), 2.5, 2) == 0.0

    def test_zero_power_convention(self):
        # 0^0 = 1: an observation exactly at the line counts in the headcount
        assert fgt_estimate(build_sample([2.5, 5.0]), 2.5, 0) == 0.5

    def test_bad_threshold(self):
        with pytest.raises(BadThreshold):
            fgt_estimate(build_sample([1.0]), 0.0, 1)

    def test_monotone_in_income(self):
        base = [0.5, 1.0, 1.5, 3.0]
        z = 2.0
        for alpha in (0.5, 1, 2):
            lower = fgt_estimate(build_sample(base), z, alpha)
            bumped = list(base)
            bumped[0] = 0.9  # raise one poor income, staying below z
            higher = fgt_estimate(build_sample(bumped), z, alpha)
            assert higher <= lower


class TestNamedEstimates:
    """Frozen oracle values: direct evaluation of the finite-n displays."""

    @pytest.mark.parametrize("index,want", [
        (NamedIndex.sen(2.0), 0.25),
        (NamedIndex.shorrocks(2.0), 0.375),
        (NamedIndex.thon(2.0), 1 / 3),
        (NamedIndex.kakwani(1, 2.0), 0.25),
        (NamedIndex.takayama(2.0), 0.5),
    ])
    def test_two_point_oracles(self, index, want):
        assert named_estimate(build_sample([1, 3]), index) == pytest.approx(want, abs=1e-15)

    def test_sen_direct_formula(self):
        vals = [0.5, 0.8, 1.9, 2.5, 4.0]
        z = 2.0
        s = build_sample(vals)
        n, srt = len(vals), sorted(vals)
        q = sum(v <= z for v in srt)
        want = 2.0 / (n * (q + 1)) * sum((q - j + 1) * (z - srt[j - 1]) / z
                                         for j in range(1, q + 1))
        assert named_estimate(s, NamedIndex.sen(z)) == pytest.approx(want, abs=1e-15)

    def test_nobody_poor_convention(self):
        s = build_sample([3.0, 4.0])
        assert named_estimate(s, NamedIndex.sen(2.0)) == 0.0
        assert named_estimate(s, NamedIndex.kakwani(2, 2.0)) == 0.0

    def test_takayama_rank_identity(self):
        # C_n equals the 1/n^2-normalized rank-weighted sum, ties included
        vals = [0.5, 1.2, 1.2, 0.9, 3.0, 1.2]
        z = 1.5
        s = build_sample(vals)
        n = s.n
        rank_sum = sum((n - round(n * ecdf(s, v)) + 1) * v
                       for v in vals if v <= z) / n**2
        assert named_estimate(s, NamedIndex.takayama(z)) == pytest.approx(rank_sum, abs=1e-14)

    def test_takayama_ratio(self):
        s = build_sample([1, 3])
        c = named_estimate(s, NamedIndex.takayama(2.0))
        assert named_estimate(s, NamedIndex.takayama_ratio(2.0)) == pytest.approx(c / 2.0)

    def test_takayama_zero_mean(self):
        with pytest.raises(ZeroMean):
            named_estimate(build_sample([0.0, 0.0]), NamedIndex.takayama_ratio(1.0))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(min_value=0.01, max_value=100.0), min_size=2, max_size=20),
           st.floats(min_value=0.5, max_value=50.0),
           st.floats(min_value=0.1, max_value=10.0))
    def test_scale_invariance(self, vals, z, c):
        for index in (NamedIndex.fgt(1.0, z), NamedIndex.sen(z), NamedIndex.kakwani(2, z),
                      NamedIndex.shorrocks(z), NamedIndex.thon(z)):
            base = named_estimate(build_sample(vals), index)
            scaled_index = NamedIndex(kind=index.kind, alpha=index.alpha, k=index.k,
                                      order=index.order, poverty_line=c * z, d=index.d)
            scaled = named_estimate(build_sample([c * v for v in vals]), scaled_index)
            assert scaled == pytest.approx(base, rel=1e-12, abs=1e-12)


class TestMoments:
    def test_first_central_moment_zero(self):
        s = build_sample([1.0, 5.0, -2.0])
        assert central_moment_estimate(s, 1) == pytest.approx(0.0, abs=1e-15)

    def test_two_point_variance(self):
        assert central_moment_estimate(build_sample([1, 3]), 2) == 1.0

    def test_symmetric_sample_skewness(self):
        assert normalized_moment_estimate(build_sample([-1.0, 1.0]), 2, "odd") == 0.0

    def test_zero_variance(self):
        with pytest.raises(ZeroVariance):
            normalized_moment_estimate(build_sample([2.0, 2.0]), 2, "even")

    def test_influence_simplifies_to_centered_square(self):
        # A(2)(x) == (x - m1)^2 pointwise
        model = EmpiricalDistribution(np.sort(np.random.default_rng(17).lognormal(size=40)))
        rep = moment_representation(model, 2)
        m1 = model.raw_moment(1)
        x = np.random.default_rng(18).uniform(-3, 3, size=20)
        assert np.max(np.abs(rep.h(x) - (x - m1) ** 2)) < 1e-10

    def test_moment_rep_centering(self):
        # E A(l)(X) == mu_l up to the additive constant killed by the fep:
        # check the variance against the classical formula for l = 2
        model = Normal(0, 1)
        rep = moment_representation(model, 2)
        assert index_variance(model, rep).total == pytest.approx(2.0, rel=1e-8)

    def test_skewness_variance_normal(self):
        from indexlaw.indices import normalized_moment_representation

        rep = normalized_moment_representation(Normal(0, 1), 2, "odd")
        assert index_variance(Normal(0, 1), rep).total == pytest.approx(6.0, rel=1e-6)

    def test_kurtosis_variance_normal(self):
        from indexlaw.indices import normalized_moment_representation

        rep = normalized_moment_representation(Normal(0, 1), 2, "even")
        assert index_variance(Normal(0, 1), rep).total == pytest.approx(24.0, rel=1e-6)

    def test_odd_value_vanishes_for_symmetric(self):
        from indexlaw.indices import normalized_moment_representation

        rep = normalized_moment_representation(Normal(0, 1), 2, "odd")
        assert rep.value(Normal(0, 1)) == pytest.approx(0.0, abs=1e-9)
        assert Normal(0, 1).integrate_score(rep.h) == pytest.approx(0.0, abs=1e-8)


class TestRepresentations:
    def test_fgt_weight_is_zero(self):
        rep = named_representation(LogNormal(0, 1), NamedIndex.fgt(1.5, 1.0))
        pts = np.random.default_rng(3).uniform(0, 3, size=10)
        assert np.all(rep.q(pts) == 0.0)
        assert rep.q_zero

    def test_shorrocks_score_example(self):
        rep = named_representation(Uniform(0, 1), NamedIndex.shorrocks(0.5))
        assert rep.h(np.array([0.25]))[0] == pytest.approx(0.75, abs=1e-14)
        assert rep.q(np.array([0.25]))[0] == pytest.approx(-1.0, abs=1e-14)

    def test_threshold_outside_support(self):
        with pytest.raises(ThresholdOutsideSupport):
            named_representation(Uniform(0, 1), NamedIndex.sen(2.0))

    def test_sen_value_by_simulation(self):
        # named_estimate converges to value(F) within 3 SE
        model = Exponential(1.0)
        idx = NamedIndex.sen(1.0)
        rep = named_representation(model, idx)
        val = rep.value(model)
        gam = index_variance(model, rep).total
        n = 100000
        est = named_estimate(draw(model, n, stream_seed(21, 0)), idx)
        assert abs(est - val) <= 3.0 * math.sqrt(gam / n)

    def test_thon_shares_shorrocks_limit(self):
        model = LogNormal(0, 1)
        r1 = named_representation(model, NamedIndex.shorrocks(1.0))
        r2 = named_representation(model, NamedIndex.thon(1.0))
        assert r1.value(model) == pytest.approx(r2.value(model), rel=1e-12)


def _sen_gpi_spec(z):
    return GpiSpec(A=lambda Q, n, Z: Q, w=lambda t: t, d=asarray,
                   mu=(0, 1, 1, 1), c=lambda x, y: x * (x - y),
                   pi=lambda x, y: y, Z=z,
                   dc_dx=lambda x, y: 2 * x - y, dc_dy=lambda x, y: -x,
                   dpi_dx=lambda x, y: 0.0, dpi_dy=lambda x, y: 1.0)


def _kakwani_gpi_spec(z, k):
    # normalization with H_pi = 1: c = (k+1)(1 - y/x)^k, pi = (k+1) y^k / x^(k+1)
    return GpiSpec(
        A=lambda Q, n, Z: Q, w=lambda t: t ** k, d=asarray, mu=(0, 1, 1, 1),
        c=lambda x, y: (k + 1) * (1 - y / x) ** k,
        pi=lambda x, y: (k + 1) * y ** k / x ** (k + 1),
        Z=z,
        dc_dx=lambda x, y: (k + 1) * k * (1 - y / x) ** (k - 1) * y / x ** 2,
        dc_dy=lambda x, y: -(k + 1) * k * (1 - y / x) ** (k - 1) / x,
        dpi_dx=lambda x, y: -(k + 1) ** 2 * y ** k / x ** (k + 2),
        dpi_dy=lambda x, y: (k + 1) * k * y ** (k - 1) / x ** (k + 1))


class TestGpi:
    def test_sen_parameters_reproduce_sen(self):
        s = build_sample([1, 3])
        assert gpi_estimate(s, _sen_gpi_spec(2.0)) == pytest.approx(0.25, abs=1e-12)
        s2 = build_sample([0.3, 0.9, 1.4, 2.2, 5.0])
        assert gpi_estimate(s2, _sen_gpi_spec(1.5)) == pytest.approx(
            named_estimate(s2, NamedIndex.sen(1.5)), abs=1e-12)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_kakwani_parameters_reproduce_kakwani(self, k):
        s = build_sample([0.3, 0.9, 1.4, 2.2, 5.0])
        spec = GpiSpec(A=lambda Q, n, Z: Q, w=lambda t: t ** k, d=asarray,
                       mu=(0, 1, 1, 1), c=lambda x, y: x * (x - y) ** k,
                       pi=lambda x, y: y ** k, Z=1.5)
        assert gpi_estimate(s, spec) == pytest.approx(
            named_estimate(s, NamedIndex.kakwani(k, 1.5)), abs=1e-12)

    def test_shorrocks_parameters(self):
        s = build_sample([0.3, 0.9, 1.4, 2.2, 5.0])
        spec = GpiSpec(A=lambda Q, n, Z: (Q * (Q + 1) / 2) / n, w=lambda t: t,
                       d=asarray, mu=(2, 0, 2, 1), c=lambda x, y: 2 * (x - y),
                       pi=lambda x, y: y, Z=1.5)
        assert gpi_estimate(s, spec) == pytest.approx(
            named_estimate(s, NamedIndex.shorrocks(1.5)), abs=1e-12)

    def test_thon_parameters(self):
        s = build_sample([0.3, 0.9, 1.4, 2.2, 5.0])
        n = s.n
        spec = GpiSpec(A=lambda Q, nn, Z: Q * (Q + 1) / (nn + 1), w=lambda t: t,
                       d=asarray, mu=(1, 0, 1, 1), c=lambda x, y: 2 * (x - y),
                       pi=lambda x, y: y, Z=1.5)
        assert gpi_estimate(s, spec) == pytest.approx(
            named_estimate(s, NamedIndex.thon(1.5)), abs=1e-12)

    def test_zero_gap_function(self):
        spec = _sen_gpi_spec(2.0)
        spec = GpiSpec(A=spec.A, w=spec.w, d=lambda t: np.zeros_like(asarray(t)),
                       mu=spec.mu, c=spec.c, pi=spec.pi, Z=spec.Z)
        assert gpi_estimate(build_sample([1, 3]), spec) == 0.0

    def test_nobody_poor(self):
        assert gpi_estimate(build_sample([3.0, 4.0]), _sen_gpi_spec(2.0)) == 0.0

    def test_kakwani_constants_uniform(self):
        # H_c = int_0^0.5 2 (1 - 2y)^2 dy = 1/3 (exact); H_pi = 1 by the
        # normalization; J = H_c
        consts = gpi_constants(Uniform(0, 1), _kakwani_gpi_spec(0.5, 1))
        assert consts.H_pi == pytest.approx(1.0, abs=1e-9)
        assert consts.H_c == pytest.approx(1 / 3, abs=1e-9)
        assert consts.J == pytest.approx(1 / 3, abs=1e-9)

    def test_k_collapses_when_c_free_of_x(self):
        # c independent of its first argument and H_pi = 1: K = -H_c K_pi
        spec = GpiSpec(A=lambda Q, n, Z: 1.0, w=lambda t: 1.0, d=asarray,
                       mu=(0, 1, 1, 1), c=lambda x, y: 1.0 - y,
                       pi=lambda x, y: 2.0 * y / x ** 2, Z=0.5,
                       dc_dx=lambda x, y: 0.0, dc_dy=lambda x, y: -1.0,
                       dpi_dx=lambda x, y: -4.0 * y / x ** 3,
                       dpi_dy=lambda x, y: 2.0 / x ** 2)
        consts = gpi_constants(Uniform(0, 1), spec)
        assert consts.H_pi == pytest.approx(1.0, abs=1e-9)
        assert consts.K_c == pytest.approx(0.0, abs=1e-12)
        assert consts.K == pytest.approx(-consts.H_c * consts.K_pi, rel=1e-9)

    def test_generic_matches_closed_form_kakwani(self):
        model = Uniform(0, 1)
        grep = gpi_representation(model, _kakwani_gpi_spec(0.5, 1))
        krep = named_representation(model, NamedIndex.kakwani(1, 0.5))
        grid = np.linspace(1e-4, 1 - 1e-4, 1001)
        assert np.max(np.abs(grep.h(grid) - krep.h(grid))) < 1e-6
        assert np.max(np.abs(grep.q(grid) - krep.q(grid))) < 1e-6
        assert grep.value(model) == pytest.approx(krep.value(model), rel=1e-9)

    def test_numeric_partials_fallback(self):
        spec = _kakwani_gpi_spec(0.5, 1)
        nop = GpiSpec(A=spec.A, w=spec.w, d=spec.d, mu=spec.mu, c=spec.c,
                      pi=spec.pi, Z=spec.Z)
        with_partials = gpi_constants(Uniform(0, 1), spec)
        without = gpi_constants(Uniform(0, 1), nop)
        assert without.K == pytest.approx(with_partials.K, rel=1e-6, abs=1e-8)


class TestNamedIndexValidation:
    def test_bad_kind(self):
        with pytest.raises(OutOfRange):
            NamedIndex("gini", poverty_line=1.0)

    def test_poverty_line_required(self):
        with pytest.raises(BadThreshold):
            NamedIndex("sen")

    def test_kakwani_k(self):
        with pytest.raises(OutOfRange):
            NamedIndex.kakwani(0, 1.0)

    def test_moment_orders(self):
        with pytest.raises(OutOfRange):
            NamedIndex.central_moment(0)
        with pytest.raises(OutOfRange):
            NamedIndex.odd_normalized(1)


class TestCatalogConsistency:
    """named_estimate at large n lands within 4 SE of value(F) for every
    catalog kind (moment preconditions respected per family)."""

    CASES = [
        (NamedIndex.fgt(0.0, 0.5), Uniform(0, 1)),
        (NamedIndex.fgt(1.0, 1.0), LogNormal(0, 1)),
        (NamedIndex.sen(1.0), Exponential(1.0)),
        (NamedIndex.kakwani(2, 2.0), Pareto(1.0, 3.0)),
        (NamedIndex.shorrocks(1.0), LogNormal(0, 1)),
        (NamedIndex.thon(0.5), Uniform(0, 1)),
        (NamedIndex.takayama(1.0), Exponential(1.0)),
        (NamedIndex.takayama_ratio(1.0), LogNormal(0, 1)),
        (NamedIndex.central_moment(2), Normal(0, 1)),
        (NamedIndex.central_moment(3), Uniform(0, 1)),
        (NamedIndex.odd_normalized(2), Normal(0, 1)),
        (NamedIndex.even_normalized(2), Uniform(0, 1)),
    ]

    @pytest.mark.parametrize("index,family", CASES,
                             ids=[c[0].label() for c in CASES])
    def test_estimate_near_value(self, index, family):
        rep = named_representation(family, index)
        value = rep.value(family)
        gamma = index_variance(family, rep).total
        n = 40000
        est = named_estimate(draw(family, n, stream_seed(314, 0)), index)
        assert abs(est - value) <= 4.0 * math.sqrt(gamma / n)
