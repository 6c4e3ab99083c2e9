"""Confidence-sequence radii and uniform boundaries.

Every function here is pure: it maps (time, quantile level, parameters) to a
radius in quantile space.  Radii are deliberately not clipped to [0, 1];
consumers translate out-of-range levels into infinite order-statistic
sentinels.  Functions accepting a time `t` also accept numpy arrays of times
and broadcast over them.

Numeric contract: root-finding bisections run to 1e-9 absolute in the
boundary-crossing variable (or 60 iterations); the eta-infimum behind the
iterated-logarithm miscoverage rate uses a 512-point log grid refined by
golden section to 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, ndtri

from .errors import ConfigurationError, DomainError, NumericalError, TuningError
from .specfun import expit, golden_section_min, lambert_wm1, log_beta, log_betainc, logit, zeta

__all__ = [
    "StitchConfig",
    "BetaBinomialConfig",
    "LilConfig",
    "DoubleStitchConfig",
    "stitched_radius",
    "stitched_radius_simple",
    "double_stitch_radius",
    "double_stitch_log_constant",
    "beta_binomial_log_mixture",
    "one_sided_log_mixture",
    "beta_binomial_radius",
    "one_sided_beta_binomial_radius",
    "ftilde_asymptote",
    "AsymptoteResult",
    "expansion_constant",
    "expansion_constant_limit",
    "tune_r",
    "tuning_denominator",
    "normal_mixture_radius",
    "lil_alpha",
    "lil_C",
    "lil_C_closed_form",
    "lil_radius",
    "baseline_radius",
    "BASELINE_KINDS",
    "normal_quantile",
    "bernoulli_kl",
]

_SQRT2 = math.sqrt(2.0)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f"alpha must lie in (0, 1), got {alpha}")


def _check_open_unit(p: float, name: str = "p") -> None:
    if not 0.0 < p < 1.0:
        raise DomainError(f"{name} must lie in (0, 1), got {p}")


def _times(t, minimum: float = 1.0):
    """Validate a time grid and return (array, was_scalar)."""
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if arr.size and np.any(arr < minimum):
        raise DomainError(f"t must be >= {minimum:g}")
    return arr, scalar


def _ret(arr, scalar):
    return float(arr[0]) if scalar else arr


# ---------------------------------------------------------------------------
# parameter bundles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StitchConfig:
    """Hyperparameters of the polynomial stitched boundary.

    eta > 1 is the geometric epoch ratio, s_exp > 1 the polynomial decay of
    per-epoch error, m_start >= 1 the time the boundary is tuned to, and
    alpha the total two-sided crossing probability.
    """

    eta: float
    s_exp: float
    m_start: float = 1.0
    alpha: float = 0.05

    def __post_init__(self):
        if self.eta <= 1.0:
            raise ConfigurationError(f"eta must exceed 1, got {self.eta}")
        if self.s_exp <= 1.0:
            raise ConfigurationError(f"s_exp must exceed 1, got {self.s_exp}")
        if self.m_start < 1.0:
            raise ConfigurationError(f"m_start must be >= 1, got {self.m_start}")
        _check_alpha(self.alpha)

    @property
    def k1(self) -> float:
        return (self.eta ** 0.25 + self.eta ** -0.25) / _SQRT2

    @property
    def k2(self) -> float:
        return (math.sqrt(self.eta) + 1.0) / 2.0


@dataclass(frozen=True)
class BetaBinomialConfig:
    """Beta-binomial mixture parameters for a fixed target level p."""

    p: float
    r: float
    alpha: float = 0.05

    def __post_init__(self):
        _check_open_unit(self.p)
        if self.r <= 0.0:
            raise ConfigurationError(f"r must be positive, got {self.r}")
        _check_alpha(self.alpha)


@dataclass(frozen=True)
class LilConfig:
    """Iterated-logarithm boundary parameters A, C and start time m."""

    a_mult: float = 0.85
    c_add: float = 8.123
    m_start: float = 1.0

    def __post_init__(self):
        if self.a_mult <= 1.0 / _SQRT2:
            raise ConfigurationError(f"a_mult must exceed 1/sqrt(2), got {self.a_mult}")
        if self.c_add <= 0.0:
            raise ConfigurationError(f"c_add must be positive, got {self.c_add}")
        if self.m_start < 1.0:
            raise ConfigurationError(f"m_start must be >= 1, got {self.m_start}")


@dataclass(frozen=True)
class DoubleStitchConfig:
    """Quantile-grid stitching parameters (grid fineness delta plus StitchConfig)."""

    grid_delta: float
    eta: float
    s_exp: float
    m_start: float = 1.0
    alpha: float = 0.05

    def __post_init__(self):
        if self.grid_delta <= 0.0:
            raise ConfigurationError(f"grid_delta must be positive, got {self.grid_delta}")
        if self.eta <= 1.0:
            raise ConfigurationError(f"eta must exceed 1, got {self.eta}")
        if self.s_exp <= 1.0:
            raise ConfigurationError(f"s_exp must exceed 1, got {self.s_exp}")
        if self.m_start < 1.0:
            raise ConfigurationError(f"m_start must be >= 1, got {self.m_start}")
        _check_alpha(self.alpha)

    @classmethod
    def default_preset(cls, alpha: float = 0.05, m_start: float = 1.0) -> "DoubleStitchConfig":
        """delta=0.5, eta=2.041, s=1.4: the reference tuning this bound ships with."""
        return cls(grid_delta=0.5, eta=2.041, s_exp=1.4, m_start=m_start, alpha=alpha)

    @property
    def k1(self) -> float:
        return (self.eta ** 0.25 + self.eta ** -0.25) / _SQRT2

    @property
    def k2(self) -> float:
        return (math.sqrt(self.eta) + 1.0) / 2.0


# ---------------------------------------------------------------------------
# stitched boundaries
# ---------------------------------------------------------------------------


def stitched_radius(t, p: float, cfg: StitchConfig):
    """General stitched confidence radius S_p(t v m) / t.

    S_p(t) = sqrt(k1^2 p(1-p) t l(t) + k2^2 c_p^2 l(t)^2) + c_p k2 l(t) with
    l(t) = s log log(eta t / m) + log(2 zeta(s) / (alpha log^s eta)) and
    c_p = (1 - 2p)/3.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    t_arr, scalar = _times(t)
    tm = np.maximum(t_arr, cfg.m_start)
    z = zeta(cfg.s_exp)
    const = math.log(2.0 * z / (cfg.alpha * math.log(cfg.eta) ** cfg.s_exp))
    ell = cfg.s_exp * np.log(np.log(cfg.eta * tm / cfg.m_start)) + const
    if np.any(ell < 0.0):
        raise NumericalError("stitched boundary log term is negative for this configuration")
    cp = (1.0 - 2.0 * p) / 3.0
    s_val = np.sqrt(cfg.k1 ** 2 * p * (1.0 - p) * tm * ell + (cfg.k2 * cp) ** 2 * ell ** 2)
    s_val += cp * cfg.k2 * ell
    return _ret(s_val / t_arr, scalar)


def stitched_radius_simple(t, p: float, alpha: float = 0.05):
    """Closed-form stitched radius with conservatively rounded constants.

    f_t(p) = 1.5 sqrt(p(1-p) l(t)) + 0.8 l(t),
    l(t) = (1.4 log log(2.1 t) + log(10/alpha)) / t.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    _check_alpha(alpha)
    t_arr, scalar = _times(t)
    ell = (1.4 * np.log(np.log(2.1 * t_arr)) + math.log(10.0 / alpha)) / t_arr
    out = 1.5 * np.sqrt(p * (1.0 - p) * ell) + 0.8 * ell
    return _ret(out, scalar)


def double_stitch_log_constant(cfg: DoubleStitchConfig) -> float:
    """The additive constant 2 zeta(s)(2 zeta(s)+1) / log^s(eta) inside l(p, t)."""
    z = zeta(cfg.s_exp)
    return 2.0 * z * (2.0 * z + 1.0) / math.log(cfg.eta) ** cfg.s_exp


def double_stitch_radius(t, p: float, cfg: DoubleStitchConfig):
    """Time- and quantile-uniform stitched radius g~_t(p) / t.

    Three-term form: a quantile-grid rounding term, the stitched main term in
    the surrogate level r(p,t), and the sub-gamma correction.
    """
    _check_open_unit(p)
    t_arr, scalar = _times(t)
    tm = np.maximum(t_arr, cfg.m_start)
    delta = cfg.grid_delta
    if p >= 0.5:
        rpt = np.full_like(tm, p)
    else:
        rpt = np.minimum(0.5, expit(logit(p) + 2.0 * delta * np.sqrt(cfg.m_start * cfg.eta / tm)))
    sigma2 = rpt * (1.0 - rpt)
    j = np.sqrt(tm / cfg.m_start) * abs(logit(p)) / (2.0 * delta) + 1.0
    ell = (
        cfg.s_exp * np.log(np.log(cfg.eta * tm / cfg.m_start))
        + cfg.s_exp * np.log(j)
        + math.log(double_stitch_log_constant(cfg) / cfg.alpha)
    )
    if np.any(ell < 0.0):
        raise NumericalError("double-stitch log term is negative for this configuration")
    cp = (1.0 - 2.0 * p) / 3.0
    g = delta * np.sqrt(cfg.eta * tm * sigma2 / cfg.m_start)
    g += np.sqrt(cfg.k1 ** 2 * sigma2 * tm * ell + (cfg.k2 * cp) ** 2 * ell ** 2)
    g += cp * cfg.k2 * ell
    return _ret(g / t_arr, scalar)


# ---------------------------------------------------------------------------
# beta-binomial mixtures
# ---------------------------------------------------------------------------


def _mixture_args(s_val, v, p: float, r: float):
    """Beta arguments of the mixture, raising if either is non-positive."""
    a = (r + v) / p - s_val
    b = (r + v) / (1.0 - p) + s_val
    if np.any(a <= 0.0):
        raise DomainError(
            "mixture argument (r+v)/p - s must be positive; s exceeds the upper domain"
        )
    if np.any(b <= 0.0):
        raise DomainError(
            "mixture argument (r+v)/(1-p) + s must be positive; s is below the lower domain"
        )
    return a, b


def beta_binomial_log_mixture(s_val, v, p: float, r: float):
    """log M_{p,r}(s, v), the two-sided beta-binomial mixture supermartingale.

    M_{p,r}(s,v) = p^{-(v/(1-p)+s)} (1-p)^{-(v/p-s)}
                   B((r+v)/p - s, (r+v)/(1-p) + s) / B(r/p, r/(1-p)).
    Accepts arrays for s and v.
    """
    _check_open_unit(p)
    if r <= 0.0:
        raise ConfigurationError(f"r must be positive, got {r}")
    s_arr = np.asarray(s_val, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    scalar = s_arr.ndim == 0 and v_arr.ndim == 0
    s_arr, v_arr = np.broadcast_arrays(np.atleast_1d(s_arr), np.atleast_1d(v_arr))
    if np.any(v_arr < 0.0):
        raise DomainError("intrinsic time v must be nonnegative")
    a, b = _mixture_args(s_arr, v_arr, p, r)
    out = (
        -(v_arr / (1.0 - p) + s_arr) * math.log(p)
        - (v_arr / p - s_arr) * math.log(1.0 - p)
        + log_beta(a, b)
        - log_beta(r / p, r / (1.0 - p))
    )
    return _ret(out, scalar)


def one_sided_log_mixture(s_val, v, p: float, r: float):
    """log M^1_{p,r}(s, v): the one-sided mixture, nondecreasing in s.

    Same prefactor as the two-sided mixture but with incomplete beta
    functions truncated at 1-p.
    """
    _check_open_unit(p)
    if r <= 0.0:
        raise ConfigurationError(f"r must be positive, got {r}")
    s_arr = np.asarray(s_val, dtype=float)
    v_arr = np.asarray(v, dtype=float)
    scalar = s_arr.ndim == 0 and v_arr.ndim == 0
    s_arr, v_arr = np.broadcast_arrays(np.atleast_1d(s_arr), np.atleast_1d(v_arr))
    if np.any(v_arr < 0.0):
        raise DomainError("intrinsic time v must be nonnegative")
    a, b = _mixture_args(s_arr, v_arr, p, r)
    x = 1.0 - p
    log_num = log_betainc(a, b, x) + log_beta(a, b)
    log_den = log_betainc(r / p, r / (1.0 - p), x) + log_beta(r / p, r / (1.0 - p))
    out = (
        -(v_arr / (1.0 - p) + s_arr) * math.log(p)
        - (v_arr / p - s_arr) * math.log(1.0 - p)
        + log_num
        - log_den
    )
    return _ret(out, scalar)


def _mixture_root(log_mix, t_arr, p: float, r: float, alpha: float):
    """Bisect s in [0, (r+v)/p) for log_mix(s, v) = log(1/alpha); returns s/t."""
    v = p * (1.0 - p) * t_arr
    target = math.log(1.0 / alpha)
    s_hi = (r + v) / p * (1.0 - 1e-12)
    s_lo = np.zeros_like(v)
    never = log_mix(s_hi, v, p, r) < target
    for _ in range(60):
        if np.max(s_hi - s_lo) <= 1e-9:
            break
        mid = 0.5 * (s_lo + s_hi)
        ge = log_mix(mid, v, p, r) >= target
        s_hi = np.where(ge, mid, s_hi)
        s_lo = np.where(ge, s_lo, mid)
    root = 0.5 * (s_lo + s_hi)
    # If even the domain supremum keeps the mixture below 1/alpha the boundary
    # is never crossed and the radius is trivial.
    root = np.where(never, (r + v) / p, root)
    return root / t_arr


def beta_binomial_radius(t, p: float, r: float, alpha: float = 0.05):
    """Two-sided beta-binomial radius f~_t(p): root of M_{p,r}(s, p(1-p)t) = 1/alpha."""
    _check_open_unit(p)
    if r <= 0.0:
        raise ConfigurationError(f"r must be positive, got {r}")
    _check_alpha(alpha)
    t_arr, scalar = _times(t)
    return _ret(_mixture_root(beta_binomial_log_mixture, t_arr, p, r, alpha), scalar)


def one_sided_beta_binomial_radius(t, p: float, r: float, alpha: float = 0.05):
    """One-sided radius: root of M^1_{p,r}(s, p(1-p)t) = 1/alpha.

    The lower radius at level p is this function evaluated at 1-p (the
    intrinsic time p(1-p)t is symmetric in p).
    """
    _check_open_unit(p)
    if r <= 0.0:
        raise ConfigurationError(f"r must be positive, got {r}")
    _check_alpha(alpha)
    t_arr, scalar = _times(t)
    return _ret(_mixture_root(one_sided_log_mixture, t_arr, p, r, alpha), scalar)


class AsymptoteResult(NamedTuple):
    value: float
    pre_asymptotic: bool


def expansion_constant(p: float, r: float) -> float:
    """C_{p,r} = sqrt(2 pi) p(1-p) f_beta(p; r/(1-p), r/p)."""
    _check_open_unit(p)
    if r <= 0.0:
        raise ConfigurationError(f"r must be positive, got {r}")
    a = r / (1.0 - p)
    b = r / p
    log_pdf = (a - 1.0) * math.log(p) + (b - 1.0) * math.log1p(-p) - float(log_beta(a, b))
    return math.exp(0.5 * math.log(2.0 * math.pi) + math.log(p * (1.0 - p)) + log_pdf)


def expansion_constant_limit(r: float) -> float:
    """Limit of C_{p,r} as p -> 0 or 1: sqrt(2 pi) r^r / (e^r Gamma(r))."""
    if r <= 0.0:
        raise ConfigurationError(f"r must be positive, got {r}")
    return math.exp(0.5 * math.log(2.0 * math.pi) + r * math.log(r) - r - float(gammaln(r)))


def ftilde_asymptote(t: float, p: float, r: float, alpha: float = 0.05) -> AsymptoteResult:
    """Leading-order expansion of the beta-binomial radius (diagnostic only).

    sqrt((p(1-p)/t) log(p(1-p) t / (C_{p,r}^2 alpha^2))) with the o(1) term
    dropped; returns 0 with pre_asymptotic=True when the log argument is <= 1.
    """
    _check_open_unit(p)
    _check_alpha(alpha)
    if t < 1:
        raise DomainError("t must be >= 1")
    c = expansion_constant(p, r)
    log_arg = math.log(p * (1.0 - p) * t) - 2.0 * math.log(c) - 2.0 * math.log(alpha)
    if log_arg <= 0.0:
        return AsymptoteResult(0.0, True)
    return AsymptoteResult(math.sqrt(p * (1.0 - p) / t * log_arg), False)


# ---------------------------------------------------------------------------
# tuning
# ---------------------------------------------------------------------------


def tuning_denominator(alpha: float, form: str = "approx") -> float:
    """The divisor -W_{-1}(-alpha^2/e) - 1 of the mixture tuning rule.

    form="approx" evaluates the asymptotic expansion
    2 log(1/alpha) + log log(e/alpha^2), which the shipped reference tunings
    (r = 0.758 at p = 0.5, m = 32, alpha = 0.05) are consistent with;
    form="lambert" evaluates the exact branch by bisection.  The two differ
    in the second decimal (7.936 vs 8.212 at alpha = 0.05).
    """
    _check_alpha(alpha)
    if form == "approx":
        return 2.0 * math.log(1.0 / alpha) + math.log(math.log(math.e / alpha ** 2))
    if form == "lambert":
        return -lambert_wm1(-(alpha ** 2) / math.e) - 1.0
    raise ConfigurationError(f"unknown tuning form {form!r}")


def tune_r(m_target: float, p: float, alpha: float = 0.05, form: str = "approx") -> float:
    """Mixture tuning r = p(1-p) (m / D(alpha) - 1) optimizing for time m_target."""
    if m_target < 1.0:
        raise TuningError(f"m_target must be >= 1, got {m_target}")
    _check_open_unit(p)
    d = tuning_denominator(alpha, form)
    r = p * (1.0 - p) * (m_target / d - 1.0)
    if r <= 0.0:
        raise TuningError(
            f"tuning rule gives r={r:.4g} <= 0 at m_target={m_target}; increase m_target"
        )
    return r


# ---------------------------------------------------------------------------
# normal mixture and iterated-logarithm boundaries
# ---------------------------------------------------------------------------


def normal_mixture_radius(t, r: float, alpha: float = 0.05):
    """Sub-Gaussian mixture radius sqrt(((t+r)/t^2) log((t+r)/(alpha^2 r)))."""
    if r <= 0.0:
        raise ConfigurationError(f"r must be positive, got {r}")
    _check_alpha(alpha)
    t_arr, scalar = _times(t)
    out = np.sqrt((t_arr + r) / t_arr ** 2 * np.log((t_arr + r) / (alpha ** 2 * r)))
    return _ret(out, scalar)


def _lil_objective(eta: float, a_mult: float, c_add: float) -> float:
    gamma = math.sqrt(2.0 / eta) * (a_mult - math.sqrt(2.0 * (eta - 1.0) / c_add))
    if gamma <= 1.0:
        return math.inf
    g2 = gamma * gamma
    return 4.0 * math.exp(-g2 * c_add) * (1.0 + 1.0 / ((g2 - 1.0) * math.log(eta)))


@lru_cache(maxsize=4096)
def lil_alpha(a_mult: float, c_add: float) -> float:
    """Crossing probability alpha_{A,C} of the iterated-logarithm boundary.

    Infimum over eta in (1, 2A^2) with gamma(A, C, eta) > 1 of
    4 e^{-gamma^2 C} (1 + 1/((gamma^2-1) log eta)); returns +inf when no
    feasible eta exists (a vacuous bound, value >= 1).
    """
    if a_mult <= 1.0 / _SQRT2:
        raise ConfigurationError(f"a_mult must exceed 1/sqrt(2), got {a_mult}")
    if c_add <= 0.0:
        raise ConfigurationError(f"c_add must be positive, got {c_add}")
    eta_hi = 2.0 * a_mult ** 2 - 1e-6
    eta_lo = 1.0 + 1e-6
    if eta_hi <= eta_lo:
        return math.inf
    grid = np.exp(np.linspace(math.log(eta_lo), math.log(eta_hi), 512))
    vals = np.array([_lil_objective(e, a_mult, c_add) for e in grid])
    i = int(np.argmin(vals))
    if not math.isfinite(vals[i]):
        return math.inf
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    eta_star = golden_section_min(lambda e: _lil_objective(e, a_mult, c_add), lo, hi, tol=1e-8)
    return min(float(vals[i]), _lil_objective(eta_star, a_mult, c_add))


def lil_C_closed_form(alpha: float) -> float:
    """Closed-form inverse 0.8 log(1612/alpha), valid when the result is >= 7."""
    _check_alpha(alpha)
    return 0.8 * math.log(1612.0 / alpha)


@lru_cache(maxsize=4096)
def lil_C(a_mult: float, alpha: float) -> float:
    """Smallest C with lil_alpha(a_mult, C) <= alpha, by bisection in C."""
    _check_alpha(alpha)
    lo = 1e-9
    hi = 1.0
    for _ in range(80):
        if lil_alpha(a_mult, hi) <= alpha:
            break
        hi *= 2.0
    else:
        raise NumericalError("could not bracket lil_C")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if lil_alpha(a_mult, mid) <= alpha:
            hi = mid
        else:
            lo = mid
    return hi


def lil_radius(t, a_mult: float, c_add: float, m_start: float = 1.0):
    """g_t = A sqrt((log log(e (t v m) / m) + C) / t)."""
    if m_start < 1.0:
        raise ConfigurationError(f"m_start must be >= 1, got {m_start}")
    t_arr, scalar = _times(t)
    tm = np.maximum(t_arr, m_start)
    out = a_mult * np.sqrt((np.log(np.log(math.e * tm / m_start)) + c_add) / t_arr)
    return _ret(out, scalar)


# ---------------------------------------------------------------------------
# literature baselines
# ---------------------------------------------------------------------------

BASELINE_KINDS = (
    "dkw_fixed",
    "dr1968",
    "szorenyi",
    "dr1967",
    "clt_pointwise",
    "hoeffding_kl",
    "linear_warmup",
)


def normal_quantile(p: float) -> float:
    """Standard normal quantile (scipy's ndtri)."""
    return float(ndtri(p))


def bernoulli_kl(q, p):
    """KL(q || p) between Bernoulli distributions, with 0 log 0 = 0."""
    q_arr = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(q_arr > 0.0, q_arr * np.log(q_arr / p), 0.0)
        t2 = np.where(q_arr < 1.0, (1.0 - q_arr) * np.log((1.0 - q_arr) / (1.0 - p)), 0.0)
    out = t1 + t2
    return float(out) if np.ndim(q) == 0 else out


def _hoeffding_kl_radius(t_arr, p: float, alpha: float):
    target = math.log(2.0 / alpha) / t_arr
    hi_cap = (1.0 - p) * (1.0 - 1e-12)
    lo = np.zeros_like(t_arr)
    hi = np.full_like(t_arr, hi_cap)
    # KL(p+x || p) increases in x on [0, 1-p); cap at the trivial radius when
    # even x -> 1-p cannot reach the target.
    trivial = bernoulli_kl(p + hi, p) < target
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        ge = bernoulli_kl(p + mid, p) >= target
        hi = np.where(ge, mid, hi)
        lo = np.where(ge, lo, mid)
    out = 0.5 * (lo + hi)
    return np.where(trivial, 1.0 - p, out)


def baseline_radius(kind: str, t, p: float = 0.5, alpha: float = 0.05, lam: float | None = None):
    """Radius of a literature baseline at time t.

    Kinds ignoring p (dkw_fixed, dr1968, szorenyi, dr1967) accept it but do
    not use it.  szorenyi generalizes the reference constant 2.093 to
    0.5 log(pi^2/(3 alpha)) (a union bound over t >= 32 with quadratically
    decaying per-time error probability).  linear_warmup takes an optional
    mixing parameter lam; when omitted it is optimized for the requested t.
    """
    _check_alpha(alpha)
    t_arr, scalar = _times(t)
    if kind == "dkw_fixed":
        out = np.sqrt(math.log(2.0 / alpha) / (2.0 * t_arr))
    elif kind == "dr1968":
        out = np.sqrt((t_arr + 1.0) * (2.0 * np.log(t_arr) + 0.601)) / t_arr
    elif kind == "szorenyi":
        if np.any(t_arr < 32):
            raise DomainError("szorenyi baseline requires t >= 32")
        const = 0.5 * math.log(math.pi ** 2 / (3.0 * alpha))
        out = np.sqrt((np.log(t_arr - 31.0) + const) / t_arr)
    elif kind == "dr1967":
        if np.any(t_arr < 2):
            raise DomainError("dr1967 baseline requires t >= 2")
        out = 3.0 / (2.0 * _SQRT2) * np.sqrt((np.log(np.log(t_arr)) + 1.457) / t_arr)
    elif kind == "clt_pointwise":
        _check_open_unit(p)
        out = normal_quantile(1.0 - alpha / 2.0) * np.sqrt(p * (1.0 - p) / t_arr)
    elif kind == "hoeffding_kl":
        _check_open_unit(p)
        out = _hoeffding_kl_radius(t_arr, p, alpha)
    elif kind == "linear_warmup":
        log_inv = math.log(1.0 / alpha)
        if lam is None:
            lam_arr = np.sqrt(8.0 * log_inv / t_arr)
        else:
            if lam <= 0.0:
                raise DomainError("lam must be positive")
            lam_arr = np.full_like(t_arr, lam)
        out = log_inv / (lam_arr * t_arr) + lam_arr / 8.0
    else:
        raise DomainError(f"unknown baseline kind {kind!r}; valid kinds: {BASELINE_KINDS}")
    return _ret(out, scalar)
