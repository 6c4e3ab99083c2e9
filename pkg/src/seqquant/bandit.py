"""Quantile epsilon-best-arm identification (LUCB-style) and its diagnostics.

The algorithm samples the arm with the highest lower confidence bound on the
(pi+eps)-quantile together with every arm maximizing the upper confidence
bound on the (pi-eps)-quantile among the rest, and stops as soon as some
arm's lower bound clears every other arm's upper bound.  Confidence bounds
are order statistics at levels shifted by time-uniform radii evaluated at
per-arm sample counts.

Reproducibility: all sampling is by quantile transform of uniforms drawn as
integers in (0, 2^53) / 2^53 from numpy PCG64 generators; per-run streams are
derived by seeding with SeedSequence((seed, indices...)).  Radii depend only
on the per-arm count, so they are memoized in tables shared across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import median
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtri

from . import boundaries
from .empdist import OrderedMultiset, _level_ceil, _level_floor
from .errors import ConfigurationError, DomainError, NumericalError

__all__ = [
    "ArmSpec",
    "uniform_arm",
    "cauchy_arm",
    "normal_arm",
    "custom_arm",
    "QlucbConfig",
    "RunResult",
    "CS_KINDS",
    "SCENARIOS",
    "scenario_arms",
    "qlucb_confidence_bounds",
    "qlucb_run",
    "eps_optimal_set",
    "gap_deltas",
    "tau_bound",
    "bai_benchmark",
    "BaiRow",
]

CS_KINDS = ("stitched_qlucb", "beta_binomial_one_sided", "dkw_union_baseline")
SCENARIOS = ("uniform_shift", "cauchy_shift", "normal_scale")

_U53 = float(1 << 53)
_TOL = 1e-12


@dataclass(frozen=True)
class ArmSpec:
    """An arm as a quantile function; analytic kinds carry their parameters.

    The quantile callable must be monotone nondecreasing on (0, 1) and accept
    numpy arrays.  For the built-in continuous families the upper and lower
    quantile functions coincide.
    """

    kind: str
    params: tuple
    quantile: Callable

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.integers(1, 1 << 53, size=size) / _U53
        return np.asarray(self.quantile(u), dtype=float)


def uniform_arm(a: float, b: float) -> ArmSpec:
    if not b > a:
        raise ConfigurationError("uniform arm needs b > a")
    return ArmSpec("uniform", (a, b), lambda p: a + (b - a) * np.asarray(p, dtype=float))


def cauchy_arm(loc: float, scale: float) -> ArmSpec:
    if scale <= 0:
        raise ConfigurationError("cauchy arm needs positive scale")
    return ArmSpec(
        "cauchy", (loc, scale),
        lambda p: loc + scale * np.tan(math.pi * (np.asarray(p, dtype=float) - 0.5)),
    )


def normal_arm(mu: float, sigma: float) -> ArmSpec:
    if sigma <= 0:
        raise ConfigurationError("normal arm needs positive sigma")
    return ArmSpec("normal", (mu, sigma), lambda p: mu + sigma * ndtri(np.asarray(p, dtype=float)))


def custom_arm(quantile: Callable) -> ArmSpec:
    return ArmSpec("custom", (), quantile)


def scenario_arms(name: str, k_arms: int, eps: float, pi_target: float) -> list[ArmSpec]:
    """Benchmark scenarios; the exceptional arm is always the last one."""
    if k_arms < 2:
        raise ConfigurationError("scenarios need at least two arms")
    if name == "uniform_shift":
        return [uniform_arm(0.0, 1.0) for _ in range(k_arms - 1)] + [
            uniform_arm(2.0 * eps, 1.0 + 2.0 * eps)
        ]
    if name == "cauchy_shift":
        base = cauchy_arm(0.0, 1.0)
        loc = 2.0 * (base.quantile(pi_target + eps) - base.quantile(pi_target))
        return [cauchy_arm(0.0, 1.0) for _ in range(k_arms - 1)] + [cauchy_arm(float(loc), 1.0)]
    if name == "normal_scale":
        return [normal_arm(0.0, 1.0) for _ in range(k_arms - 1)] + [normal_arm(0.0, 2.0)]
    raise ConfigurationError(f"unknown scenario {name!r}; valid: {SCENARIOS}")


@dataclass(frozen=True)
class QlucbConfig:
    """Problem setup for one QLUCB run."""

    pi_target: float
    eps: float
    delta_err: float = 0.05
    cs_kind: str = "beta_binomial_one_sided"
    k_arms: int = 2
    max_rounds: int = 10 ** 6
    seed: int = 0
    tune_m: float = 32.0

    def __post_init__(self):
        if not 0.0 < self.pi_target < 1.0:
            raise ConfigurationError(f"pi_target must lie in (0, 1), got {self.pi_target}")
        cap = min(self.pi_target, 1.0 - self.pi_target)
        if not 0.0 <= self.eps < cap:
            raise ConfigurationError(f"eps must lie in [0, {cap:g}), got {self.eps}")
        if not 0.0 < self.delta_err < 1.0:
            raise ConfigurationError(f"delta_err must lie in (0, 1), got {self.delta_err}")
        if self.cs_kind not in CS_KINDS:
            raise ConfigurationError(f"cs_kind must be one of {CS_KINDS}, got {self.cs_kind!r}")
        if self.k_arms < 2:
            raise ConfigurationError(f"k_arms must be >= 2, got {self.k_arms}")
        if self.max_rounds < 1:
            raise ConfigurationError("max_rounds must be positive")


@dataclass(frozen=True)
class RunResult:
    chosen_arm: int
    total_samples: int
    per_arm_counts: tuple[int, ...]
    rounds: int
    eps_optimal: bool | None
    stopped_by_cap: bool


class _RadiusTable:
    """Per-count radii (l_n at pi+eps, u_n at pi-eps), grown geometrically."""

    def __init__(self, cfg: QlucbConfig):
        self.cfg = cfg
        self._lo = np.empty(0)
        self._hi = np.empty(0)
        if cfg.cs_kind == "beta_binomial_one_sided":
            alpha2 = 2.0 * cfg.delta_err / cfg.k_arms
            self._r_lo = boundaries.tune_r(cfg.tune_m, cfg.pi_target + cfg.eps, alpha2)
            self._r_hi = boundaries.tune_r(cfg.tune_m, cfg.pi_target - cfg.eps, alpha2)

    def _build(self, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        cfg = self.cfg
        pi, eps = cfg.pi_target, cfg.eps
        if cfg.cs_kind == "stitched_qlucb":
            ell = (1.4 * np.log(np.log(2.1 * n)) + math.log(5.0 * cfg.k_arms / cfg.delta_err)) / n
            lo_level = 1.0 - (pi + eps)
            hi_level = pi - eps
            lo = 1.5 * np.sqrt(lo_level * (1.0 - lo_level) * ell) + 0.8 * ell
            hi = 1.5 * np.sqrt(hi_level * (1.0 - hi_level) * ell) + 0.8 * ell
            return lo, hi
        if cfg.cs_kind == "beta_binomial_one_sided":
            alpha1 = cfg.delta_err / cfg.k_arms
            lo = boundaries.one_sided_beta_binomial_radius(n, 1.0 - (pi + eps), self._r_lo, alpha1)
            hi = boundaries.one_sided_beta_binomial_radius(n, pi - eps, self._r_hi, alpha1)
            return np.atleast_1d(lo), np.atleast_1d(hi)
        # dkw_union_baseline: DKW with a quadratically decaying union bound
        alpha2 = 2.0 * cfg.delta_err / cfg.k_arms
        rad = np.full(n.shape, math.inf)
        ok = n >= 32
        if np.any(ok):
            rad[ok] = boundaries.baseline_radius("szorenyi", n[ok], alpha=alpha2)
        return rad, rad.copy()

    def get(self, n: int) -> tuple[float, float]:
        if n > len(self._lo):
            new_cap = max(1024, 2 * len(self._lo), n)
            grid = np.arange(len(self._lo) + 1, new_cap + 1, dtype=float)
            lo, hi = self._build(grid)
            self._lo = np.concatenate([self._lo, lo])
            self._hi = np.concatenate([self._hi, hi])
        return float(self._lo[n - 1]), float(self._hi[n - 1])


_TABLE_CACHE: dict[tuple, _RadiusTable] = {}


def _radius_table(cfg: QlucbConfig) -> _RadiusTable:
    key = (cfg.cs_kind, cfg.pi_target, cfg.eps, cfg.delta_err, cfg.k_arms, cfg.tune_m)
    table = _TABLE_CACHE.get(key)
    if table is None:
        table = _TABLE_CACHE[key] = _RadiusTable(cfg)
    return table


def qlucb_confidence_bounds(data: OrderedMultiset, cfg: QlucbConfig):
    """(L, U) at the current per-arm count: order statistics at shifted levels."""
    n = len(data)
    if n < 1:
        raise DomainError("confidence bounds need at least one observation")
    lo_rad, hi_rad = _radius_table(cfg).get(n)
    lower = data.upper_quantile(cfg.pi_target + cfg.eps - lo_rad)
    upper = data.lower_quantile(cfg.pi_target - cfg.eps + hi_rad)
    return lower, upper


def eps_optimal_set(arms: Sequence[ArmSpec], pi_target: float, eps: float) -> set[int]:
    """Arms k with Q_k(pi+eps) >= max_j Q_j(pi-eps), up to a 1e-12 grace."""
    lo_vals = [float(a.quantile(pi_target - eps)) for a in arms]
    best = max(lo_vals)
    tol = _TOL * max(1.0, abs(best))
    return {
        k for k, a in enumerate(arms) if float(a.quantile(pi_target + eps)) >= best - tol
    }


def qlucb_run(arms: Sequence[ArmSpec], cfg: QlucbConfig,
              rng: np.random.Generator | None = None) -> RunResult:
    """One QLUCB run; deterministic given (arms, cfg, seed)."""
    k_arms = len(arms)
    if k_arms < 2:
        raise ConfigurationError("need at least two arms")
    if k_arms != cfg.k_arms:
        raise ConfigurationError(f"config says k_arms={cfg.k_arms}, got {k_arms} arms")
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence((cfg.seed,)))
    table = _radius_table(cfg)
    pi, eps = cfg.pi_target, cfg.eps

    data = [OrderedMultiset() for _ in range(k_arms)]
    counts = [0] * k_arms
    lower = [-math.inf] * k_arms
    upper = [math.inf] * k_arms
    buffers = [[] for _ in range(k_arms)]

    def draw(k: int) -> float:
        buf = buffers[k]
        if not buf:
            buf.extend(arms[k].sample(rng, 256)[::-1])
        return buf.pop()

    def pull(k: int) -> None:
        ms = data[k]
        ms.insert(draw(k))
        counts[k] += 1
        n = counts[k]
        lo_rad, hi_rad = table.get(n)
        lo_level = pi + eps - lo_rad
        hi_level = pi - eps + hi_rad
        k_lo = _level_floor(n, lo_level) + 1
        k_hi = _level_ceil(n, hi_level)
        lower[k] = ms.order_stat(k_lo) if 1 <= k_lo <= n else (-math.inf if k_lo < 1 else math.inf)
        upper[k] = ms.order_stat(k_hi) if 1 <= k_hi <= n else (-math.inf if k_hi < 1 else math.inf)

    for k in range(k_arms):
        pull(k)
    rounds = 1
    capped = False
    while True:
        # top-2 upper bounds for the "max over others" tests
        max1 = -math.inf
        max1_idx = -1
        max2 = -math.inf
        for j in range(k_arms):
            u = upper[j]
            if u > max1:
                max2 = max1
                max1, max1_idx = u, j
            elif u > max2:
                max2 = u
        winner = -1
        for k in range(k_arms):
            others = max2 if k == max1_idx else max1
            if lower[k] >= others:
                winner = k
                break
        if winner >= 0:
            break
        if rounds >= cfg.max_rounds:
            capped = True
            best = max(range(k_arms), key=lambda k: (lower[k], -k))
            winner = best
            break
        h = max(range(k_arms), key=lambda k: (lower[k], -k))
        max_other_u = max(upper[j] for j in range(k_arms) if j != h)
        chosen = [h] + [j for j in range(k_arms) if j != h and upper[j] == max_other_u]
        for k in chosen:
            pull(k)
        rounds += 1

    eps_opt: bool | None = None
    try:
        eps_opt = winner in eps_optimal_set(arms, pi, eps)
    except Exception:
        eps_opt = None
    return RunResult(
        chosen_arm=winner,
        total_samples=sum(counts),
        per_arm_counts=tuple(counts),
        rounds=rounds,
        eps_optimal=eps_opt,
        stopped_by_cap=capped,
    )


# ---------------------------------------------------------------------------
# analytic gaps and sample-complexity diagnostics
# ---------------------------------------------------------------------------


def gap_deltas(arms: Sequence[ArmSpec], pi_target: float, eps: float,
               tol: float = 1e-9) -> list[float]:
    """Per-arm difficulty gaps Delta_k from the analytic quantile functions.

    Suboptimal arms (and every arm when several are eps-optimal) solve
    sup{D: Q_k(pi+D) <= max_j Q_j(pi-D)}; a unique eps-optimal arm instead
    solves sup{D: Q_k(pi-D) > max_{j!=k} Q_j(pi+Delta_j)}, which uses the
    other arms' gaps and is therefore computed last.
    """
    if not 0.0 < pi_target < 1.0:
        raise ConfigurationError("pi_target must lie in (0, 1)")
    opt = eps_optimal_set(arms, pi_target, eps)
    cap = min(pi_target, 1.0 - pi_target)

    def q(k: int, level: float) -> float:
        level = min(max(level, 1e-15), 1.0 - 1e-15)
        return float(arms[k].quantile(level))

    def case_one(k: int) -> float:
        def holds(d: float) -> bool:
            return q(k, pi_target + d) <= max(q(j, pi_target - d) for j in range(len(arms)))

        if holds(cap):
            return cap
        lo, hi = 0.0, cap
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if holds(mid):
                lo = mid
            else:
                hi = mid
        return lo

    deltas = [0.0] * len(arms)
    unique_opt = len(opt) == 1
    star = next(iter(opt)) if unique_opt else -1
    for k in range(len(arms)):
        if not (unique_opt and k == star):
            deltas[k] = case_one(k)
    if unique_opt:
        rhs = max(
            q(j, pi_target + deltas[j]) for j in range(len(arms)) if j != star
        )

        def holds_star(d: float) -> bool:
            return q(star, pi_target - d) > rhs

        if not holds_star(0.0):
            deltas[star] = 0.0
        elif holds_star(pi_target):
            deltas[star] = pi_target
        else:
            lo, hi = 0.0, pi_target
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if holds_star(mid):
                    lo = mid
                else:
                    hi = mid
            deltas[star] = lo
    return deltas


def tau_bound(delta_k: float, eps: float, pi_target: float, k_arms: int,
              delta_err: float) -> int:
    """Smallest n with g_n + max(u_n(pi), l_n(pi+eps)) < max(Delta_k, eps).

    g_n is the quantile-uniform iterated-logarithm radius at the union-bound
    constant 0.8 log(1612 K / delta); u_n and l_n are the stitched per-arm
    radii used by the algorithm.  Diagnostic for the 4 sum(tau_k) sample
    bound; found by doubling then bisection (the left side is eventually
    decreasing in n).
    """
    target = max(delta_k, eps)
    if target <= 0.0:
        raise DomainError("gap and eps are both zero: the bound is unbounded")
    c_add = 0.8 * math.log(1612.0 * k_arms / delta_err)
    log5k = math.log(5.0 * k_arms / delta_err)

    def radius_sum(n: float) -> float:
        g = 0.85 * math.sqrt((math.log(math.log(math.e * n)) + c_add) / n)
        ell = (1.4 * math.log(math.log(2.1 * n)) + log5k) / n
        u = 1.5 * math.sqrt((pi_target) * (1.0 - pi_target) * ell) + 0.8 * ell
        lo_level = 1.0 - (pi_target + eps)
        l = 1.5 * math.sqrt(lo_level * (1.0 - lo_level) * ell) + 0.8 * ell
        return g + max(u, l)

    n = 1
    while radius_sum(n) >= target:
        n *= 2
        if n > 1 << 62:
            raise NumericalError("tau bound exceeds 2^62 samples")
    lo, hi = max(1, n // 2), n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if radius_sum(mid) < target:
            hi = mid
        else:
            lo = mid
    return hi if radius_sum(lo) >= target else lo


# ---------------------------------------------------------------------------
# benchmark harness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BaiRow:
    scenario: str
    pi: float
    cs_kind: str
    runs: int
    mean_samples: float
    median_samples: float
    correct_rate: float
    capped_runs: int


def bai_benchmark(
    scenario: str,
    pi_list: Sequence[float],
    eps: float = 0.025,
    delta_err: float = 0.05,
    cs_kinds: Sequence[str] = ("beta_binomial_one_sided",),
    runs: int = 64,
    seed: int = 0,
    k_arms: int = 10,
    max_rounds: int = 10 ** 6,
) -> list[BaiRow]:
    """Mean/median sample size and correctness rate per (pi, cs_kind).

    Run (i_pi, i_kind, i_run) uses the generator seeded by
    SeedSequence((seed, i_pi, i_kind, i_run)), so every cell of the table is
    reproducible in isolation.
    """
    if runs < 1:
        raise ConfigurationError("runs must be >= 1")
    rows = []
    for i_pi, pi in enumerate(pi_list):
        arms = scenario_arms(scenario, k_arms, eps, pi)
        for i_kind, kind in enumerate(cs_kinds):
            cfg = QlucbConfig(
                pi_target=pi, eps=eps, delta_err=delta_err, cs_kind=kind,
                k_arms=k_arms, max_rounds=max_rounds, seed=seed,
            )
            samples = []
            correct = 0
            capped = 0
            for i_run in range(runs):
                rng = np.random.default_rng(np.random.SeedSequence((seed, i_pi, i_kind, i_run)))
                res = qlucb_run(arms, cfg, rng=rng)
                samples.append(res.total_samples)
                correct += 1 if res.eps_optimal else 0
                capped += 1 if res.stopped_by_cap else 0
            rows.append(
                BaiRow(
                    scenario=scenario,
                    pi=pi,
                    cs_kind=kind,
                    runs=runs,
                    mean_samples=float(np.mean(samples)),
                    median_samples=float(median(samples)),
                    correct_rate=correct / runs,
                    capped_runs=capped,
                )
            )
    return rows
