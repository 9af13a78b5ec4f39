"""Seeded Monte Carlo harness validating the implemented limit laws.

Every experiment derives one substream per replicate from a 64-bit master
seed (see :mod:`indexlaw.rng`), draws by inverse-CDF transform, reduces in
replicate order, and returns a fully deterministic :class:`McReport`.

Experiments
-----------
* ``normality_experiment``     -- standardizes replicate index estimates by
  the analytic-model variance and runs a Kolmogorov-Smirnov test against the
  standard normal (isolates the central limit claim).
* ``coverage_experiment``      -- per-replicate plug-in variance and normal
  confidence interval; reports the fraction covering the true value
  (isolates the practical procedure).
* ``cre2_diagnostic``          -- the integral condition coupling the
  uniform quantile process with the weight increment, evaluated exactly over
  the sample cells; its mean absolute value should shrink with n when the
  transformed weight is continuous.
* ``decomposability_experiment`` -- multinomial group labels, per-group
  draws, gap statistics standardized by the analytic decomposition variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .decomposition import gap_variance
from .distributions import (DistributionModel, EmpiricalDistribution, Mixture,
                            normal_cdf)
from .empirical import EmpiricalSample, build_sample
from .errors import BadParams, ZeroVariance
from .indices import NamedIndex, named_estimate, named_representation
from .representation import (DEFAULT_GRID, confidence_interval, index_variance)
from .rng import stream_seed, uniforms

_GAUSS2 = (0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0))


@dataclass
class McReport:
    """Replication report; bit-identical across runs for a fixed seed."""

    experiment: str
    master_seed: int
    n: int
    n_replicates: int
    replicate_values: np.ndarray
    standardized: np.ndarray
    ks_stat: float = float("nan")
    ks_pvalue: float = float("nan")
    coverage: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "experiment": self.experiment,
            "master_seed": self.master_seed,
            "n": self.n,
            "replicates": self.n_replicates,
            "ks_stat": self.ks_stat,
            "ks_pvalue": self.ks_pvalue,
            "coverage": self.coverage,
            "replicate_values": [float(v) for v in self.replicate_values],
            "standardized": [float(v) for v in self.standardized],
        }
        out.update(self.extra)
        return out


# ---------------------------------------------------------------------------
# Sampling and the KS test
# ---------------------------------------------------------------------------


def draw(family: DistributionModel, n: int, stream_seed_value: int) -> EmpiricalSample:
    """n inverse-CDF draws from a deterministic uniform stream."""
    if n < 1:
        raise BadParams("need n >= 1 draws")
    u = uniforms(stream_seed_value, n)
    return build_sample(np.asarray(family.quantile(u), dtype=float))


def ks_statistic(values: Sequence[float], cdf=normal_cdf) -> float:
    """One-sample Kolmogorov-Smirnov statistic against a continuous CDF."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(np.max(np.maximum(grid_hi - f, f - grid_lo)))


def ks_pvalue(stat: float, n: int, terms: int = 100) -> float:
    """Asymptotic Kolmogorov p-value 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)."""
    lam = math.sqrt(n) * stat
    if lam <= 0.0:
        return 1.0
    total = 0.0
    for k in range(1, terms + 1):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * (k * lam) ** 2)
        total += term
        if abs(term) < 1e-16:
            break
    return float(min(max(total, 0.0), 1.0))


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def normality_experiment(family: DistributionModel, index: NamedIndex, n: int,
                         n_replicates: int, master_seed: int,
                         grid: int = DEFAULT_GRID) -> McReport:
    """KS test of sqrt(n) (I_n - I) / sqrt(Gamma) against the standard
    normal, with value and variance from the analytic model."""
    rep = named_representation(family, index)
    value = rep.value(family)
    gamma = index_variance(family, rep, grid=grid).total
    if gamma <= 1e-14:
        raise ZeroVariance("the index has zero asymptotic variance under this model")
    scale = math.sqrt(gamma)
    estimates = np.empty(n_replicates)
    for r in range(n_replicates):
        sample = draw(family, n, stream_seed(master_seed, r))
        estimates[r] = named_estimate(sample, index)
    standardized = math.sqrt(n) * (estimates - value) / scale
    stat = ks_statistic(standardized)
    return McReport(experiment="normality", master_seed=master_seed, n=n,
                    n_replicates=n_replicates, replicate_values=estimates,
                    standardized=standardized, ks_stat=stat,
                    ks_pvalue=ks_pvalue(stat, n_replicates),
                    extra={"value": value, "variance": gamma, "index": index.label()})


def coverage_experiment(family: DistributionModel, index: NamedIndex, n: int,
                        n_replicates: int, level: float, master_seed: int,
                        grid: int = DEFAULT_GRID) -> McReport:
    """Fraction of plug-in normal confidence intervals covering the true
    index value."""
    rep = named_representation(family, index)
    value = rep.value(family)
    estimates = np.empty(n_replicates)
    standardized = np.empty(n_replicates)
    hits = 0
    for r in range(n_replicates):
        sample = draw(family, n, stream_seed(master_seed, r))
        est = named_estimate(sample, index)
        plug = EmpiricalDistribution(sample)
        var = index_variance(plug, named_representation(plug, index), grid=grid).total
        lo, hi = confidence_interval(est, var, n, level)
        hits += int(lo <= value <= hi)
        estimates[r] = est
        standardized[r] = (math.sqrt(n) * (est - value) / math.sqrt(var)
                           if var > 0 else 0.0)
    stat = ks_statistic(standardized)
    return McReport(experiment="coverage", master_seed=master_seed, n=n,
                    n_replicates=n_replicates, replicate_values=estimates,
                    standardized=standardized, ks_stat=stat,
                    ks_pvalue=ks_pvalue(stat, n_replicates),
                    coverage=hits / n_replicates,
                    extra={"value": value, "level": level, "index": index.label()})


def cre2_diagnostic(family: DistributionModel, q, n_grid: Sequence[int],
                    n_replicates: int, master_seed: int) -> list[tuple[int, float]]:
    """Mean absolute value of ``int sqrt(n) (s - V_n(s)) (l(V_n(s)) - l(s)) ds``
    per sample size, with V_n the uniform sample quantile function.

    The V_n factor is integrated exactly over its cells; the smooth l-factor
    uses two-point Gauss nodes per cell, which is exact whenever l is
    piecewise linear.
    """

    def ell(s):
        return np.asarray(q(np.asarray(family.quantile(s), dtype=float)), dtype=float)

    results = []
    for idx, n in enumerate(n_grid):
        acc = 0.0
        edges = np.arange(n + 1) / n
        widths = np.diff(edges)
        for r in range(n_replicates):
            u = np.sort(uniforms(stream_seed(master_seed, r, channel=idx), n))
            lu = ell(u)
            total = 0.0
            for frac in _GAUSS2:
                s = edges[:-1] + frac * widths
                total += 0.5 * float(np.sum(widths * (s - u) * (lu - ell(s))))
            acc += abs(math.sqrt(n) * total)
        results.append((int(n), acc / n_replicates))
    return results


def decomposability_experiment(families: Sequence[DistributionModel],
                               weights: Sequence[float], index: NamedIndex,
                               n: int, n_replicates: int, master_seed: int,
                               grid: int = DEFAULT_GRID) -> McReport:
    """Multinomial subgroup draws; gap statistics standardized by the
    analytic decomposition variance (theta1^2 + theta2^2)."""
    p = np.asarray(weights, dtype=float)
    if len(families) != p.size or p.size == 0:
        raise BadParams("weights and families must align")
    if np.any(p <= 0) or not np.isclose(p.sum(), 1.0, atol=1e-9):
        raise BadParams("weights must be positive and sum to 1")
    k = p.size
    dec = gap_variance(p, list(families), lambda m: named_representation(m, index),
                       grid=grid)
    variance = dec.theta1_sq + dec.theta2_sq
    mixture = families[0] if k == 1 else Mixture(p, families)
    rep = named_representation(mixture, index)
    gd_true = rep.value(mixture) - float(sum(
        pi * named_representation(f, index).value(f) for pi, f in zip(p, families)))
    cut = np.cumsum(p)[:-1]
    gaps = np.empty(n_replicates)
    for r in range(n_replicates):
        labels = np.searchsorted(cut, uniforms(stream_seed(master_seed, r, channel=0),
                                               n), side="left")
        v = uniforms(stream_seed(master_seed, r, channel=1), n)
        x = np.empty(n)
        for g in range(k):
            mask = labels == g
            if mask.any():
                x[mask] = np.asarray(families[g].quantile(v[mask]), dtype=float)
        whole = build_sample(x)
        total = named_estimate(whole, index)
        recomposed = 0.0
        for g in range(k):
            mask = labels == g
            if mask.any():
                recomposed += (mask.sum() / n) * named_estimate(build_sample(x[mask]),
                                                                index)
        gaps[r] = total - recomposed
    if variance > 1e-14:
        standardized = math.sqrt(n) * (gaps - gd_true) / math.sqrt(variance)
        stat = ks_statistic(standardized)
        pval = ks_pvalue(stat, n_replicates)
    else:
        standardized = np.zeros_like(gaps)
        stat = float("nan")
        pval = float("nan")
    return McReport(experiment="decomposability", master_seed=master_seed, n=n,
                    n_replicates=n_replicates, replicate_values=gaps,
                    standardized=standardized, ks_stat=stat, ks_pvalue=pval,
                    extra={"gap_value": gd_true, "variance": variance,
                           "index": index.label()})
