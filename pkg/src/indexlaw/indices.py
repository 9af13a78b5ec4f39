"""The statistic catalog: FGT, Sen, Kakwani, Shorrocks, Thon, Takayama,
the general poverty index, central moments and normalized moments.

Each catalog entry provides two things: an exact finite-n point estimator
over a sample, and an :class:`~indexlaw.representation.IndexRepresentation`
(the (h, q) score pair plus the value functional) built against a reference
distribution model, from which asymptotic variances and joint laws follow.

Conventions adopted for finite data:

* a "poor" observation satisfies ``X <= Z``; the poverty line Z is fixed;
* FGT uses ``0**0 = 1`` so that alpha = 0 is the headcount ratio;
* weighted indices whose displayed denominators involve the number of poor
  (Sen, Kakwani) are defined as 0 when nobody is poor, the limit of the
  formulas;
* the Takayama statistic is handled through its rank form
  ``C_n = (1/n) sum (1 - F_n(X_j) + 1/n) d(X_j) 1_{X_j <= Z}`` and the
  ratio variant ``T_n = C_n / mean_n`` whose representation composes the
  C-representation with the mean through the ratio rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate

from .distributions import DistributionModel
from .empirical import EmpiricalSample
from .errors import (BadThreshold, NonFiniteConstant, OutOfRange,
                     ThresholdOutsideSupport, ZeroDenominator, ZeroHpi,
                     ZeroMean, ZeroVariance)
from .representation import IndexRepresentation, compose_ratio

ScoreFunction = Callable[[np.ndarray], np.ndarray]

_POVERTY_KINDS = {"fgt", "sen", "kakwani", "shorrocks", "thon", "takayama",
                  "takayama_ratio"}
_MOMENT_KINDS = {"central_moment", "odd_moment", "even_moment"}


def _identity(x):
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class NamedIndex:
    """A catalog index: a kind tag plus its parameters."""

    kind: str
    alpha: Optional[float] = None
    k: Optional[int] = None
    order: Optional[int] = None
    poverty_line: Optional[float] = None
    d: Optional[ScoreFunction] = None

    def __post_init__(self):
        if self.kind not in _POVERTY_KINDS | _MOMENT_KINDS:
            raise OutOfRange(f"unknown index kind {self.kind!r}")
        if self.kind in _POVERTY_KINDS:
            if self.poverty_line is None or not (self.poverty_line > 0):
                raise BadThreshold("poverty kinds need a positive poverty line")
        if self.kind == "fgt" and not (self.alpha is not None and self.alpha >= 0):
            raise BadThreshold("fgt needs alpha >= 0")
        if self.kind == "kakwani" and not (self.k is not None and int(self.k) >= 1):
            raise OutOfRange("kakwani needs an integer k >= 1")
        if self.kind == "central_moment" and not (self.order and int(self.order) >= 1):
            raise OutOfRange("central moment needs order >= 1")
        if self.kind in ("odd_moment", "even_moment") and not (self.order and int(self.order) >= 2):
            raise OutOfRange("normalized moments need order p >= 2")

    # constructors ----------------------------------------------------------

    @staticmethod
    def fgt(alpha: float, poverty_line: float) -> "NamedIndex":
        return NamedIndex("fgt", alpha=float(alpha), poverty_line=float(poverty_line))

    @staticmethod
    def sen(poverty_line: float) -> "NamedIndex":
        return NamedIndex("sen", poverty_line=float(poverty_line))

    @staticmethod
    def kakwani(k: int, poverty_line: float) -> "NamedIndex":
        return NamedIndex("kakwani", k=int(k), poverty_line=float(poverty_line))

    @staticmethod
    def shorrocks(poverty_line: float) -> "NamedIndex":
        return NamedIndex("shorrocks", poverty_line=float(poverty_line))

    @staticmethod
    def thon(poverty_line: float) -> "NamedIndex":
        return NamedIndex("thon", poverty_line=float(poverty_line))

    @staticmethod
    def takayama(poverty_line: float, d: Optional[ScoreFunction] = None) -> "NamedIndex":
        return NamedIndex("takayama", poverty_line=float(poverty_line), d=d or _identity)

    @staticmethod
    def takayama_ratio(poverty_line: float, d: Optional[ScoreFunction] = None) -> "NamedIndex":
        return NamedIndex("takayama_ratio", poverty_line=float(poverty_line), d=d or _identity)

    @staticmethod
    def central_moment(order: int) -> "NamedIndex":
        return NamedIndex("central_moment", order=int(order))

    @staticmethod
    def odd_normalized(p: int) -> "NamedIndex":
        return NamedIndex("odd_moment", order=int(p))

    @staticmethod
    def even_normalized(p: int) -> "NamedIndex":
        return NamedIndex("even_moment", order=int(p))

    def label(self) -> str:
        parts = [self.kind]
        if self.alpha is not None:
            parts.append(f"alpha={self.alpha:g}")
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.order is not None:
            parts.append(f"order={self.order}")
        if self.poverty_line is not None:
            parts.append(f"Z={self.poverty_line:g}")
        return "(".join([parts[0], ", ".join(parts[1:])]) + ")" if len(parts) > 1 else parts[0]


# ---------------------------------------------------------------------------
# Point estimators
# ---------------------------------------------------------------------------


def fgt_estimate(sample: EmpiricalSample, poverty_line: float, alpha: float) -> float:
    """Foster-Greer-Thorbecke index ``(1/n) sum_{X<=Z} ((Z-X)/Z)^alpha``."""
    if not poverty_line > 0:
        raise BadThreshold("poverty line must be positive")
    if alpha < 0:
        raise BadThreshold("alpha must be nonnegative")
    x = sample.values
    poor = x <= poverty_line
    gaps = (poverty_line - x[poor]) / poverty_line
    return float(np.sum(gaps ** alpha) / sample.n)


def _poor_gaps(sample: EmpiricalSample, z: float) -> tuple[int, np.ndarray]:
    q = int(np.searchsorted(sample.values, z, side="right"))
    gaps = (z - sample.values[:q]) / z
    return q, gaps


def named_estimate(sample: EmpiricalSample, index: NamedIndex) -> float:
    """Exact finite-n value of a catalog index over the sample."""
    n = sample.n
    z = index.poverty_line
    if index.kind == "fgt":
        return fgt_estimate(sample, z, index.alpha)
    if index.kind == "sen":
        q, gaps = _poor_gaps(sample, z)
        if q == 0:
            return 0.0
        j = np.arange(1, q + 1)
        return float(2.0 / (n * (q + 1)) * np.sum((q - j + 1) * gaps))
    if index.kind == "kakwani":
        q, gaps = _poor_gaps(sample, z)
        if q == 0:
            return 0.0
        j = np.arange(1, q + 1)
        phi = float(np.sum(j.astype(float) ** index.k))
        return float(q / (n * phi) * np.sum((q - j + 1.0) ** index.k * gaps))
    if index.kind == "shorrocks":
        q, gaps = _poor_gaps(sample, z)
        j = np.arange(1, q + 1)
        return float(np.sum((2 * n - 2 * j + 1) * gaps) / n ** 2)
    if index.kind == "thon":
        q, gaps = _poor_gaps(sample, z)
        j = np.arange(1, q + 1)
        return float(2.0 / (n * (n + 1)) * np.sum((n - j + 1) * gaps))
    if index.kind == "takayama":
        return _takayama_rank_form(sample, z, index.d)
    if index.kind == "takayama_ratio":
        mean = float(np.mean(sample.values))
        if mean == 0.0:
            raise ZeroMean("takayama ratio needs a nonzero sample mean")
        return _takayama_rank_form(sample, z, index.d) / mean
    if index.kind == "central_moment":
        return central_moment_estimate(sample, index.order)
    if index.kind == "odd_moment":
        return normalized_moment_estimate(sample, index.order, "odd")
    if index.kind == "even_moment":
        return normalized_moment_estimate(sample, index.order, "even")
    raise OutOfRange(f"unknown index kind {index.kind!r}")


def _takayama_rank_form(sample: EmpiricalSample, z: float, d: ScoreFunction) -> float:
    x = sample.values
    fn = np.searchsorted(x, x, side="right") / sample.n
    poor = x <= z
    dv = np.asarray(d(x[poor]), dtype=float)
    return float(np.sum((1.0 - fn[poor] + 1.0 / sample.n) * dv) / sample.n)


def central_moment_estimate(sample: EmpiricalSample, order: int) -> float:
    """Plug-in central moment ``(1/n) sum (X_i - mean)^order``."""
    if order < 1:
        raise OutOfRange("moment order must be >= 1")
    x = sample.values
    return float(np.mean((x - np.mean(x)) ** order))


def normalized_moment_estimate(sample: EmpiricalSample, p: int, kind: str) -> float:
    """Normalized centered moment: odd ``mu_{2p-1}/mu_2^{(2p-1)/2}`` or even
    ``mu_{2p}/mu_2^p``."""
    if p < 2:
        raise OutOfRange("normalized moments need p >= 2")
    mu2 = central_moment_estimate(sample, 2)
    if mu2 == 0.0:
        raise ZeroVariance("normalized moments are undefined at zero variance")
    if kind == "odd":
        return central_moment_estimate(sample, 2 * p - 1) / mu2 ** ((2 * p - 1) / 2.0)
    if kind == "even":
        return central_moment_estimate(sample, 2 * p) / mu2 ** p
    raise OutOfRange(f"kind must be 'odd' or 'even', got {kind!r}")


# ---------------------------------------------------------------------------
# Representations of the poverty catalog
# ---------------------------------------------------------------------------


def _check_threshold(model: DistributionModel, z: float) -> float:
    fz = float(np.asarray(model.cdf(z)))
    if not (0.0 < fz < 1.0):
        raise ThresholdOutsideSupport(f"need 0 < F(Z) < 1, got F({z}) = {fz}")
    return fz


def _gap(z: float, x: np.ndarray) -> np.ndarray:
    return (z - x) / z


def _fgt_h(z: float, alpha: float) -> ScoreFunction:
    def h(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        out[poor] = _gap(z, x[poor]) ** alpha
        return out

    return h


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def _sen_constants(model: DistributionModel, z: float) -> tuple[float, float, float]:
    fz = _check_threshold(model, z)

    def j_score(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        fx = np.asarray(model.cdf(x[poor]), dtype=float)
        out[poor] = 2.0 * (1.0 - fx / fz) * _gap(z, x[poor])
        return out

    js = model.integrate_score(j_score, breaks=(z,))
    truncated_mean = model.integrate_score(
        lambda x: np.where(np.asarray(x, dtype=float) <= z, np.asarray(x, dtype=float), 0.0),
        breaks=(z,))
    ks = 2.0 * (1.0 - truncated_mean / (z * fz)) + js / fz
    if not (np.isfinite(js) and np.isfinite(ks)):
        raise NonFiniteConstant("Sen constants are not finite")
    return fz, js, ks


def _kakwani_constants(model: DistributionModel, z: float, k: int) -> tuple[float, float, float]:
    fz = _check_threshold(model, z)

    def jk_score(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        fx = np.asarray(model.cdf(x[poor]), dtype=float)
        out[poor] = (k + 1.0) * (1.0 - fx / fz) ** k * _gap(z, x[poor])
        return out

    jk = model.integrate_score(jk_score, breaks=(z,))

    def kk_core(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        fx = np.asarray(model.cdf(x[poor]), dtype=float)
        out[poor] = (1.0 - fx / fz) ** (k - 1) * _gap(z, x[poor])
        return out

    kk = k * (k + 1.0) / fz * model.integrate_score(kk_core, breaks=(z,)) + jk / fz
    if not (np.isfinite(jk) and np.isfinite(kk)):
        raise NonFiniteConstant("Kakwani constants are not finite")
    return fz, jk, kk


def named_representation(model: DistributionModel, index: NamedIndex) -> IndexRepresentation:
    """Closed-form (h, q) pair and value functional of a catalog index.

    The scores are built against the supplied model (plug-in or parametric);
    the value field stays a true functional and recomputes its constants from
    whatever model it is applied to.
    """
    z = index.poverty_line
    kind = index.kind

    if kind == "fgt":
        # no interior-threshold requirement: the FGT scores do not involve F,
        # and the variance degenerates gracefully when F(Z) hits 0 or 1
        alpha = index.alpha
        h = _fgt_h(z, alpha)
        return IndexRepresentation(
            h=h, q=_zero,
            value=lambda m, _z=z, _a=alpha: m.integrate_score(_fgt_h(_z, _a), breaks=(_z,)),
            breaks=(z,), q_zero=True, label=index.label())

    if kind in ("shorrocks", "thon"):
        _check_threshold(model, z)

        def h(x, _m=model):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            poor = x <= z
            fx = np.asarray(_m.cdf(x[poor]), dtype=float)
            out[poor] = 2.0 * (1.0 - fx) * _gap(z, x[poor])
            return out

        def q(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            poor = x <= z
            out[poor] = -2.0 * _gap(z, x[poor])
            return out

        def value(m, _z=z):
            def score(x):
                x = np.asarray(x, dtype=float)
                out = np.zeros_like(x)
                poor = x <= _z
                fx = np.asarray(m.cdf(x[poor]), dtype=float)
                out[poor] = 2.0 * (1.0 - fx) * _gap(_z, x[poor])
                return out

            return m.integrate_score(score, breaks=(_z,))

        return IndexRepresentation(h=h, q=q, value=value, breaks=(z,), label=index.label())

    if kind == "sen":
        fz, js, ks = _sen_constants(model, z)

        def h(x, _m=model, _fz=fz, _js=js, _ks=ks):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            poor = x <= z
            fx = np.asarray(_m.cdf(x[poor]), dtype=float)
            out[poor] = (2.0 * ((1.0 - fx / _fz) * _gap(z, x[poor])
                                - (fx / _fz) * (_js / _fz)) + _ks)
            return out

        def q(x, _fz=fz, _js=js):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            poor = x <= z
            out[poor] = -2.0 / _fz * (_gap(z, x[poor]) + _js / _fz)
            return out

        return IndexRepresentation(
            h=h, q=q, value=lambda m, _z=z: _sen_constants(m, _z)[1],
            breaks=(z,), label=index.label())

    if kind == "kakwani":
        k = index.k
        fz, jk, kk = _kakwani_constants(model, z, k)

        def h(x, _m=model, _fz=fz, _jk=jk, _kk=kk):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            poor = x <= z
            fx = np.asarray(_m.cdf(x[poor]), dtype=float)
            out[poor] = ((k + 1.0) * ((1.0 - fx / _fz) ** k * _gap(z, x[poor])
                                      - (_jk / _fz) * (fx / _fz) ** k) + _kk)
            return out

        def q(x, _m=model, _fz=fz, _jk=jk):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            poor = x <= z
            fx = np.asarray(_m.cdf(x[poor]), dtype=float)
            out[poor] = (-k * (k + 1.0) / _fz
                         * ((1.0 - fx / _fz) ** (k - 1) * _gap(z, x[poor])
                            + (_jk / _fz) * (fx / _fz) ** (k - 1)))
            return out

        return IndexRepresentation(
            h=h, q=q, value=lambda m, _z=z, _k=k: _kakwani_constants(m, _z, _k)[1],
            breaks=(z,), label=index.label())

    if kind in ("takayama", "takayama_ratio"):
        d = index.d
        _check_threshold(model, z)

        def hc(x, _m=model, _d=d):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            poor = x <= z
            fx = np.asarray(_m.cdf(x[poor]), dtype=float)
            out[poor] = (1.0 - fx) * np.asarray(_d(x[poor]), dtype=float)
            return out

        def q(x, _d=d):
            x = np.asarray(x, dtype=float)
            out = np.zeros_like(x)
            poor = x <= z
            out[poor] = -np.asarray(_d(x[poor]), dtype=float)
            return out

        def c_value(m, _z=z, _d=d):
            def score(x):
                x = np.asarray(x, dtype=float)
                out = np.zeros_like(x)
                poor = x <= _z
                fx = np.asarray(m.cdf(x[poor]), dtype=float)
                out[poor] = (1.0 - fx) * np.asarray(_d(x[poor]), dtype=float)
                return out

            return m.integrate_score(score, breaks=(_z,))

        c_rep = IndexRepresentation(h=hc, q=q, value=c_value, breaks=(z,),
                                    label="takayama_c")
        if kind == "takayama":
            return c_rep
        mu = model.raw_moment(1)
        if mu == 0.0:
            raise ZeroMean("takayama ratio needs a nonzero mean")
        mean_rep = IndexRepresentation(h=_identity, q=_zero,
                                       value=lambda m: m.raw_moment(1),
                                       q_zero=True, label="mean")
        return compose_ratio(c_rep, mean_rep, c_value(model), mu,
                             label=index.label())

    if kind == "central_moment":
        return moment_representation(model, index.order)
    if kind == "odd_moment":
        return normalized_moment_representation(model, index.order, "odd")
    if kind == "even_moment":
        return normalized_moment_representation(model, index.order, "even")
    raise OutOfRange(f"unknown index kind {index.kind!r}")


# ---------------------------------------------------------------------------
# Moment representations
# ---------------------------------------------------------------------------


def _influence_poly(model: DistributionModel, order: int) -> np.ndarray:
    """Polynomial coefficients of the central-moment score A(order).

    Built from the binomial expansion of ``(X - mean)^order`` around the raw
    moments of the model: the x^order term plus, for p < order, corrections
    in x^p and x.
    """
    m = [model.raw_moment(p) if p > 0 else 1.0 for p in range(order + 1)]
    coef = np.zeros(order + 1)
    coef[order] = 1.0
    for p in range(order):
        sign = (-1.0) ** (order - p)
        binom = math.comb(order, p)
        coef[p] += sign * binom * m[1] ** (order - p)
        coef[1] += sign * binom * (order - p) * m[1] ** (order - p - 1) * m[p]
    return coef


def _central_moment_value(model: DistributionModel, order: int) -> float:
    mean = model.raw_moment(1)
    return model.integrate_score(lambda x: (np.asarray(x, dtype=float) - mean) ** order)


def moment_representation(model: DistributionModel, order: int) -> IndexRepresentation:
    """Representation of the central moment of the given order (q = 0)."""
    if order < 1:
        raise OutOfRange("moment order must be >= 1")
    coef = _influence_poly(model, order)

    def h(x, _c=coef):
        return npoly.polyval(np.asarray(x, dtype=float), _c)

    return IndexRepresentation(
        h=h, q=_zero,
        value=lambda m, _o=order: _central_moment_value(m, _o),
        q_zero=True, label=f"central_moment({order})")


def normalized_moment_representation(model: DistributionModel, p: int,
                                     kind: str) -> IndexRepresentation:
    """Representation of a normalized centered moment (q = 0).

    Odd kind: score ``sigma^-(2p-1) (A(2p-1) - (2p-1)/2 sigma^-2 mu_{2p-1} A(2))``;
    even kind: ``sigma^-2p (A(2p) - p sigma^-2 mu_{2p} A(2))``.
    """
    if p < 2:
        raise OutOfRange("normalized moments need p >= 2")
    if kind not in ("odd", "even"):
        raise OutOfRange(f"kind must be 'odd' or 'even', got {kind!r}")
    sigma2 = _central_moment_value(model, 2)
    if sigma2 <= 0.0:
        raise ZeroVariance("normalized moments need positive variance")
    a2 = _influence_poly(model, 2)
    if kind == "odd":
        top = 2 * p - 1
        mu_top = _central_moment_value(model, top)
        atop = _influence_poly(model, top)
        scale = sigma2 ** (-top / 2.0)
        correction = 0.5 * top / sigma2 * mu_top
    else:
        top = 2 * p
        mu_top = _central_moment_value(model, top)
        atop = _influence_poly(model, top)
        scale = sigma2 ** (-p)
        correction = p / sigma2 * mu_top
    coef = np.zeros(max(atop.size, a2.size))
    coef[: atop.size] += atop
    coef[: a2.size] -= correction * a2
    coef *= scale

    def h(x, _c=coef):
        return npoly.polyval(np.asarray(x, dtype=float), _c)

    if kind == "odd":
        def value(m, _p=p):
            s2 = _central_moment_value(m, 2)
            if s2 <= 0.0:
                raise ZeroVariance("normalized moments need positive variance")
            return _central_moment_value(m, 2 * _p - 1) / s2 ** ((2 * _p - 1) / 2.0)
    else:
        def value(m, _p=p):
            s2 = _central_moment_value(m, 2)
            if s2 <= 0.0:
                raise ZeroVariance("normalized moments need positive variance")
            return _central_moment_value(m, 2 * _p) / s2 ** _p

    return IndexRepresentation(h=h, q=_zero, value=value, q_zero=True,
                               label=f"{kind}_moment({p})")


# ---------------------------------------------------------------------------
# The general poverty index
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GpiSpec:
    """Parameters of the general poverty index

    ``A(Q, n, Z) / (n B(Q, n)) * sum_{j<=Q} w(mu1 n + mu2 Q - mu3 j + mu4)
    d((Z - X_(j)) / Z)``

    with ``B(Q, n) = sum_{i<=Q} w(i)``, together with the limit pair
    ``(c, pi)`` describing the rank weights: ``A h^-1 w(mu1 n + mu2 Q - mu3 j
    + mu4) -> c(Q/n, j/n)`` and ``w(j) h^-1 -> pi(Q/n, j/n)/n`` for a
    normalizing sequence h(n, Q).  Partial derivatives of c and pi may be
    supplied; missing ones are approximated by central differences.
    """

    A: Callable[[int, int, float], float]
    w: Callable[[float], float]
    d: ScoreFunction
    mu: tuple[float, float, float, float]
    c: Callable[[float, float], float]
    pi: Callable[[float, float], float]
    Z: float
    dc_dx: Optional[Callable[[float, float], float]] = None
    dc_dy: Optional[Callable[[float, float], float]] = None
    dpi_dx: Optional[Callable[[float, float], float]] = None
    dpi_dy: Optional[Callable[[float, float], float]] = None


@dataclass(frozen=True)
class GpiConstants:
    """The scalar constants of the GPI representation."""

    H_c: float
    H_pi: float
    J: float
    K_c: float
    K_pi: float
    K: float


def gpi_estimate(sample: EmpiricalSample, spec: GpiSpec) -> float:
    """Finite-n general poverty index for the given parameter set."""
    n = sample.n
    z = spec.Z
    q = int(np.searchsorted(sample.values, z, side="right"))
    if q == 0:
        return 0.0
    b = float(sum(spec.w(i) for i in range(1, q + 1)))
    if b == 0.0:
        raise ZeroDenominator("B(Q, n) = sum w(i) vanished")
    mu1, mu2, mu3, mu4 = spec.mu
    j = np.arange(1, q + 1, dtype=float)
    weights = np.asarray([spec.w(mu1 * n + mu2 * q - mu3 * jj + mu4) for jj in j])
    gaps = np.asarray(spec.d((z - sample.values[:q]) / z), dtype=float)
    a = float(spec.A(q, n, z))
    return float(a / (n * b) * np.sum(weights * gaps))


def _num_partial(f: Callable[[float, float], float], arg: int,
                 step: float = 1e-5) -> Callable[[float, float], float]:
    def deriv(x, y):
        if arg == 0:
            return (f(x + step, y) - f(x - step, y)) / (2.0 * step)
        return (f(x, y + step) - f(x, y - step)) / (2.0 * step)

    return deriv


def gpi_constants(model: DistributionModel, spec: GpiSpec) -> GpiConstants:
    """The constants H_c, H_pi, J, K_c, K_pi, K of the GPI representation."""
    z = spec.Z
    fz = _check_threshold(model, z)
    dc_dx = spec.dc_dx or _num_partial(spec.c, 0)
    dpi_dx = spec.dpi_dx or _num_partial(spec.pi, 0)

    def gamma(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        out[poor] = np.asarray(spec.d((z - x[poor]) / z), dtype=float)
        return out

    def hc_score(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        fx = np.asarray(model.cdf(x[poor]), dtype=float)
        out[poor] = (np.asarray([spec.c(fz, float(v)) for v in np.atleast_1d(fx)])
                     * np.asarray(spec.d((z - x[poor]) / z), dtype=float))
        return out

    def hpi_score(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        fx = np.asarray(model.cdf(x[poor]), dtype=float)
        out[poor] = np.asarray([spec.pi(fz, float(v)) for v in np.atleast_1d(fx)])
        return out

    h_c = model.integrate_score(hc_score, breaks=(z,))
    h_pi = model.integrate_score(hpi_score, breaks=(z,))
    if h_pi == 0.0 or not np.isfinite(h_pi):
        raise ZeroHpi(f"H_pi = {h_pi}")

    def kc_integrand(s):
        x = float(np.asarray(model.quantile(s)))
        if x > z:
            return 0.0
        return dc_dx(fz, s) * float(np.asarray(spec.d((z - x) / z)))

    def kpi_integrand(s):
        x = float(np.asarray(model.quantile(s)))
        if x > z:
            return 0.0
        return dpi_dx(fz, s)

    k_c, _ = integrate.quad(kc_integrand, 0.0, 1.0, points=[fz], limit=200)
    k_pi, _ = integrate.quad(kpi_integrand, 0.0, 1.0, points=[fz], limit=200)
    j = h_c / h_pi
    k = k_c / h_pi - h_c * k_pi / h_pi ** 2
    consts = GpiConstants(H_c=h_c, H_pi=h_pi, J=j, K_c=k_c, K_pi=k_pi, K=k)
    for name, val in consts.__dict__.items():
        if not np.isfinite(val):
            raise NonFiniteConstant(f"GPI constant {name} = {val}")
    return consts


def gpi_representation(model: DistributionModel, spec: GpiSpec) -> IndexRepresentation:
    """The (h, q) pair of the general poverty index against the given model."""
    z = spec.Z
    fz = _check_threshold(model, z)
    consts = gpi_constants(model, spec)
    dc_dy = spec.dc_dy or _num_partial(spec.c, 1)
    dpi_dy = spec.dpi_dy or _num_partial(spec.pi, 1)
    ca = 1.0 / consts.H_pi
    cb = -consts.H_c / consts.H_pi ** 2

    def h(x, _m=model):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        fx = np.asarray(_m.cdf(x[poor]), dtype=float)
        gaps = np.asarray(spec.d((z - x[poor]) / z), dtype=float)
        cvals = np.asarray([spec.c(fz, float(v)) for v in np.atleast_1d(fx)])
        pvals = np.asarray([spec.pi(fz, float(v)) for v in np.atleast_1d(fx)])
        out[poor] = ca * cvals * gaps + cb * pvals + consts.K
        return out

    def q(x, _m=model):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        poor = x <= z
        fx = np.asarray(_m.cdf(x[poor]), dtype=float)
        gaps = np.asarray(spec.d((z - x[poor]) / z), dtype=float)
        dcv = np.asarray([dc_dy(fz, float(v)) for v in np.atleast_1d(fx)])
        dpv = np.asarray([dpi_dy(fz, float(v)) for v in np.atleast_1d(fx)])
        out[poor] = ca * dcv * gaps + cb * dpv
        return out

    return IndexRepresentation(
        h=h, q=q, value=lambda m, _s=spec: gpi_constants(m, _s).J,
        breaks=(z,), label="gpi")
