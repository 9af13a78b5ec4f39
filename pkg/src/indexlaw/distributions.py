"""Distribution models: empirical plug-in, parametric families, mixtures.

A distribution model is anything exposing

* ``cdf(x)``            -- nondecreasing, right-continuous,
* ``quantile(s)``       -- the generalized inverse on (0, 1),
* ``integrate_score(f)``-- the expectation of a score under the model,
* ``kind``              -- ``"empirical"`` or ``"parametric"``.

Empirical models integrate scores exactly as sample means; parametric models
integrate through the quantile substitution ``E f(X) = int_0^1 f(Q(u)) du``
with adaptive quadrature.  Models additionally expose ``quantile_extended``,
a total function on [0, 1] returning the (possibly infinite) endpoint limits;
grid-based routines use it to decide where the quantile needs clipping.

The inverse standard normal CDF is Wichura's AS241 rational approximation
(PPND16), accurate to ~1e-15 in double precision.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .empirical import EmpiricalSample, build_sample, ecdf, equantile
from .errors import BadParams, NonFiniteIntegral, NonFiniteMoment, OutOfRange

# ---------------------------------------------------------------------------
# AS241 inverse standard normal (Wichura 1988, PPND16)
# ---------------------------------------------------------------------------

_A = (3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2,
      5.3941960214247511077e3, 2.1213794301586595867e4, 3.9307895800092710610e4,
      2.8729085735721942674e4, 5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15)


def _poly(coefs, x):
    r = coefs[7]
    for c in coefs[6::-1]:
        r = r * x + c
    return r


def normal_quantile(p):
    """Inverse standard normal CDF (AS241); vectorized, +-inf at 0 and 1."""
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    if np.any((p < 0.0) | (p > 1.0)):
        raise OutOfRange("probability outside [0, 1]")
    out = np.empty_like(p)
    q = p - 0.5
    central = np.abs(q) <= 0.425
    if central.any():
        r = 0.180625 - q[central] ** 2
        out[central] = q[central] * _poly(_A, r) / _poly(_B, r)
    if (~central).any():
        qe = q[~central]
        pe = p[~central]
        r = np.where(qe < 0.0, pe, 1.0 - pe)
        with np.errstate(divide="ignore"):
            r = np.sqrt(-np.log(r))
        near = r <= 5.0
        val = np.empty_like(r)
        val[near] = _poly(_C, r[near] - 1.6) / _poly(_D, r[near] - 1.6)
        far = ~near
        finite = far & np.isfinite(r)
        val[finite] = _poly(_E, r[finite] - 5.0) / _poly(_F, r[finite] - 5.0)
        val[far & ~np.isfinite(r)] = np.inf
        out[~central] = np.where(qe < 0.0, -val, val)
    return float(out[0]) if scalar else out


def normal_cdf(x):
    """Standard normal CDF via erfc (double precision accurate)."""
    from scipy.special import erfc

    x = np.asarray(x, dtype=float)
    out = 0.5 * erfc(-x / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class DistributionModel:
    """Base class; concrete models fill in cdf/quantile and moments."""

    kind = "parametric"

    def cdf(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def quantile(self, s):
        """Generalized inverse CDF on (0, 1)."""
        s_arr = np.asarray(s, dtype=float)
        if np.any((s_arr <= 0.0) | (s_arr >= 1.0)):
            raise OutOfRange("quantile level must lie in (0, 1)")
        return self.quantile_extended(s)

    def quantile_extended(self, s):  # pragma: no cover - abstract
        """Quantile as a total function on [0, 1]; may return +-inf at the ends."""
        raise NotImplementedError

    def integrate_score(self, f: Callable, breaks: Sequence[float] = ()) -> float:
        """E f(X) by adaptive quadrature of f(Q(u)) on (0, 1).

        ``breaks`` lists x-values where f jumps (e.g. a poverty line); they
        are forwarded to the integrator as subdivision points.
        """
        pts = sorted({float(self.cdf(b)) for b in breaks if 0.0 < self.cdf(b) < 1.0})

        def g(u):
            # deep subdivision next to a singular endpoint can round u onto
            # it; nudge back inside the open interval
            u = min(max(u, 1e-300), 1.0 - 1e-16)
            return float(np.asarray(f(np.asarray(self.quantile(u)))))

        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(g, 0.0, 1.0, points=pts or None, limit=200)
        if not np.isfinite(val):
            raise NonFiniteIntegral("score integral did not converge")
        return float(val)

    def raw_moment(self, k: int) -> float:
        """E X^k; overridden with closed forms where available."""
        return self.integrate_score(lambda x: np.asarray(x, dtype=float) ** k)

    def mean(self) -> float:
        return self.raw_moment(1)


class EmpiricalDistribution(DistributionModel):
    """Plug-in model built from a sample; all integrals are exact sums."""

    kind = "empirical"

    def __init__(self, sample: EmpiricalSample | Sequence[float]):
        if not isinstance(sample, EmpiricalSample):
            sample = build_sample(sample)
        self.sample = sample

    @property
    def n(self) -> int:
        return self.sample.n

    def cdf(self, x):
        return ecdf(self.sample, x)

    def quantile(self, s):
        s_arr = np.asarray(s, dtype=float)
        if s_arr.ndim == 0:
            return equantile(self.sample, float(s_arr))
        if np.any((s_arr <= 0.0) | (s_arr > 1.0)):
            raise OutOfRange("quantile level must lie in (0, 1]")
        j = np.ceil(self.sample.n * s_arr).astype(int)
        return self.sample.values[j - 1]

    def quantile_extended(self, s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        j = np.clip(np.ceil(self.sample.n * s_arr).astype(int), 1, self.sample.n)
        out = self.sample.values[j - 1]
        return float(out[0]) if np.asarray(s).ndim == 0 else out

    def integrate_score(self, f, breaks=()) -> float:
        vals = np.asarray(f(self.sample.values), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise NonFiniteIntegral("score is non-finite on the sample")
        return float(np.mean(vals))

    def raw_moment(self, k: int) -> float:
        return float(np.mean(self.sample.values ** k))


class Uniform(DistributionModel):
    def __init__(self, a: float = 0.0, b: float = 1.0):
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise BadParams(f"uniform requires a < b, got ({a}, {b})")
        self.a, self.b = float(a), float(b)

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.a) / (self.b - self.a), 0.0, 1.0)

    def quantile_extended(self, s):
        return self.a + (self.b - self.a) * np.asarray(s, dtype=float)

    def raw_moment(self, k: int) -> float:
        return (self.b ** (k + 1) - self.a ** (k + 1)) / ((k + 1) * (self.b - self.a))


class Exponential(DistributionModel):
    def __init__(self, rate: float = 1.0):
        if not (np.isfinite(rate) and rate > 0):
            raise BadParams(f"exponential rate must be positive, got {rate}")
        self.rate = float(rate)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0.0, 0.0, -np.expm1(-self.rate * x))

    def quantile_extended(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return -np.log1p(-s) / self.rate

    def raw_moment(self, k: int) -> float:
        return math.factorial(k) / self.rate ** k


class LogNormal(DistributionModel):
    def __init__(self, mu: float = 0.0, sigma: float = 1.0):
        if not (np.isfinite(mu) and np.isfinite(sigma) and sigma > 0):
            raise BadParams(f"lognormal requires sigma > 0, got ({mu}, {sigma})")
        self.mu, self.sigma = float(mu), float(sigma)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x, dtype=float)
        pos = x > 0.0
        out[pos] = normal_cdf((np.log(x[pos]) - self.mu) / self.sigma)
        return float(out) if out.ndim == 0 else out

    def quantile_extended(self, s):
        s = np.asarray(s, dtype=float)
        z = normal_quantile(s)
        with np.errstate(over="ignore"):
            return np.exp(self.mu + self.sigma * np.asarray(z, dtype=float))

    def raw_moment(self, k: int) -> float:
        return math.exp(k * self.mu + 0.5 * (k * self.sigma) ** 2)


class Pareto(DistributionModel):
    """Pareto with scale x_m and tail index a > 2 (finite variance)."""

    def __init__(self, xm: float = 1.0, a: float = 3.0):
        if not (np.isfinite(xm) and xm > 0 and np.isfinite(a) and a > 2):
            raise BadParams(f"pareto requires xm > 0 and tail index a > 2, got ({xm}, {a})")
        self.xm, self.a = float(xm), float(a)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x <= self.xm, 0.0, 1.0 - (self.xm / np.maximum(x, self.xm)) ** self.a)
        return float(out) if out.ndim == 0 else out

    def quantile_extended(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return self.xm * (1.0 - s) ** (-1.0 / self.a)

    def raw_moment(self, k: int) -> float:
        if k >= self.a:
            raise NonFiniteMoment(f"pareto moment of order {k} is infinite for tail index {self.a}")
        return self.a * self.xm ** k / (self.a - k)


class Normal(DistributionModel):
    def __init__(self, mu: float = 0.0, sigma: float = 1.0):
        if not (np.isfinite(mu) and np.isfinite(sigma) and sigma > 0):
            raise BadParams(f"normal requires sigma > 0, got ({mu}, {sigma})")
        self.mu, self.sigma = float(mu), float(sigma)

    def cdf(self, x):
        return normal_cdf((np.asarray(x, dtype=float) - self.mu) / self.sigma)

    def quantile_extended(self, s):
        z = normal_quantile(s)
        return self.mu + self.sigma * np.asarray(z, dtype=float)

    def raw_moment(self, k: int) -> float:
        # E (mu + sigma W)^k with E W^(2j) = (2j-1)!!
        total = 0.0
        for j in range(0, k // 2 + 1):
            total += (math.comb(k, 2 * j) * self.mu ** (k - 2 * j)
                      * self.sigma ** (2 * j) * _double_factorial(2 * j - 1))
        return total


def _double_factorial(m: int) -> float:
    if m <= 0:
        return 1.0
    return float(math.prod(range(m, 0, -2)))


class Mixture(DistributionModel):
    """Finite mixture sum_i p_i F_i; the law of a subgroup-labelled draw."""

    def __init__(self, weights: Sequence[float], components: Sequence[DistributionModel]):
        w = np.asarray(weights, dtype=float)
        if len(components) != w.size or w.size == 0:
            raise BadParams("weights and components must align and be nonempty")
        if np.any(w <= 0) or not math.isclose(float(w.sum()), 1.0, abs_tol=1e-9):
            raise BadParams("mixture weights must be positive and sum to 1")
        self.weights = w / w.sum()
        self.components = list(components)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = sum(p * np.asarray(c.cdf(x), dtype=float)
                  for p, c in zip(self.weights, self.components))
        return float(out) if np.asarray(out).ndim == 0 else out

    def quantile_extended(self, s):
        from scipy.optimize import brentq

        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.empty_like(s_arr)
        for i, si in enumerate(s_arr):
            if si <= 0.0:
                out[i] = min(float(np.min(np.atleast_1d(c.quantile_extended(0.0))))
                             for c in self.components)
                continue
            if si >= 1.0:
                out[i] = max(float(np.max(np.atleast_1d(c.quantile_extended(1.0))))
                             for c in self.components)
                continue
            los, his = [], []
            for c in self.components:
                q = float(np.asarray(c.quantile_extended(si)))
                los.append(q)
                his.append(q)
            lo, hi = min(los), max(his)
            if lo == hi:
                out[i] = lo
                continue
            out[i] = brentq(lambda x: float(self.cdf(x)) - si, lo, hi, xtol=1e-13, rtol=8.9e-16)
        return float(out[0]) if np.asarray(s).ndim == 0 else out

    def integrate_score(self, f, breaks=()) -> float:
        return float(sum(p * c.integrate_score(f, breaks=breaks)
                         for p, c in zip(self.weights, self.components)))

    def raw_moment(self, k: int) -> float:
        return float(sum(p * c.raw_moment(k) for p, c in zip(self.weights, self.components)))
