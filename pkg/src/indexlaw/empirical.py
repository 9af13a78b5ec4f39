"""Order statistics, empirical CDF/quantile functions, ranks and the
functional empirical process.

The sample model is a sorted copy of the observations plus the permutation
back to input order.  The empirical CDF is the right-continuous step function
``F_n(x) = #{j : X_j <= x} / n`` and the empirical quantile function is its
generalized inverse, the left-continuous step function taking the value
``X_{(j)}`` on ``((j-1)/n, j/n]``.

Ties follow the max-rank convention: the rank of an observation is
``n * F_n(X_j)``, so the identity ``R_j / n = F_n(X_j)`` holds exactly even
with repeated values.  (The asymptotic theory assumes a continuous underlying
distribution, where ties have probability zero; the convention only matters
for discrete data.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EmptySample, NonFiniteScore, NonFiniteValue, OutOfRange

ScoreFunction = Callable[[np.ndarray], np.ndarray]
"""A measurable score: a vectorized callable mapping reals to reals."""


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted observations with rank access.

    Attributes
    ----------
    values : ndarray
        Observations sorted nondecreasing.
    n : int
        Sample size.
    original_order : ndarray
        Permutation with ``original_order[k]`` = input position of
        ``values[k]``; scattering ``values`` through it restores the input.
    """

    values: np.ndarray
    n: int
    original_order: np.ndarray

    def input_values(self) -> np.ndarray:
        """The observations in their original input order."""
        out = np.empty(self.n, dtype=float)
        out[self.original_order] = self.values
        return out


def build_sample(values) -> EmpiricalSample:
    """Validate and sort raw observations into an EmpiricalSample.

    Raises
    ------
    EmptySample
        If no observations are given.
    NonFiniteValue
        If any observation is NaN or infinite (reports the first offender).
    """
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptySample("need at least one observation")
    bad = ~np.isfinite(arr)
    if bad.any():
        raise NonFiniteValue(int(np.flatnonzero(bad)[0]))
    order = np.argsort(arr, kind="stable")
    sorted_vals = arr[order]
    sorted_vals.flags.writeable = False
    order.flags.writeable = False
    return EmpiricalSample(values=sorted_vals, n=int(arr.size), original_order=order)


def ecdf(sample: EmpiricalSample, x) -> float | np.ndarray:
    """Empirical CDF: fraction of observations <= x (vectorized in x)."""
    counts = np.searchsorted(sample.values, x, side="right")
    out = counts / sample.n
    return float(out) if np.isscalar(x) else out


def equantile(sample: EmpiricalSample, s: float) -> float:
    """Empirical quantile X_{(j)} with j the smallest integer >= n*s.

    Defined for s in (0, 1]; s = 1 returns the sample maximum.
    """
    if not (0.0 < s <= 1.0):
        raise OutOfRange(f"quantile level must lie in (0, 1], got {s}")
    j = math.ceil(sample.n * s)
    return float(sample.values[j - 1])


def ranks(sample: EmpiricalSample) -> np.ndarray:
    """Max-ranks of the observations in input order.

    Satisfies ``ranks[j] == n * ecdf(sample, X_j)`` exactly, ties included.
    """
    inp = sample.input_values()
    return np.searchsorted(sample.values, inp, side="right").astype(np.int64)


def _scores(sample: EmpiricalSample, f: ScoreFunction) -> np.ndarray:
    vals = np.asarray(f(sample.values), dtype=float)
    if vals.shape != sample.values.shape:
        vals = np.broadcast_to(vals, sample.values.shape)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteScore("score function returned a non-finite value on the sample")
    return vals


def empirical_measure(sample: EmpiricalSample, f: ScoreFunction) -> float:
    """Integral of f against the empirical measure: the mean of f over the
    observations."""
    return float(np.mean(_scores(sample, f)))


def fep(sample: EmpiricalSample, f: ScoreFunction, mean_f: float) -> float:
    """Functional empirical process at f.

    ``sqrt(n) * (P_n(f) - mean_f)`` where ``mean_f`` is the caller-supplied
    theoretical mean of f(X).  Exactly linear in f.
    """
    return math.sqrt(sample.n) * (empirical_measure(sample, f) - float(mean_f))


def residual_stat(sample: EmpiricalSample, q: ScoreFunction, model) -> float:
    """Rank-induced residual of an L-statistic.

    ``(1/n) * sum_j (F_n(X_j) - F(X_j)) q(X_j)`` with F taken from the given
    distribution model (the true or reference CDF -- plugging in the sample's
    own empirical CDF gives identically zero).
    """
    qv = _scores(sample, q)
    # F_n at the sorted values; the max-rank form stays exact under ties
    fn = np.searchsorted(sample.values, sample.values, side="right") / sample.n
    ftrue = np.asarray(model.cdf(sample.values), dtype=float)
    return float(np.mean((fn - ftrue) * qv))
