"""Asynchronous timing engine.

Builds the conversion-period budget from the regeneration-bounded worst-case
comparison, the aggregate easy-comparison settling, per-bit fixed overheads,
logic delays and the tracking phase; derives the maximum sampling rate, a
synchronous worst-slot baseline, and a Monte Carlo check that the
metastability bound inverts correctly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .comparator import decision_latencies
from .config import AdcConfig, derived_constants, t_easy_of


@dataclass(frozen=True)
class TimingBudget:
    tau_reg: float
    t_hard: float
    t_easy: float
    t_fix: float
    t_delay: float
    t_track: float
    bits: int
    f_s_max: float        # asynchronous limit [Hz]
    f_s_max_sync: float   # worst-slot synchronous baseline [Hz]
    f_s: float            # configured operating rate [Hz]

    @property
    def period(self) -> float:
        return 1.0 / self.f_s_max

    @property
    def margin(self) -> float:
        """Slack of the configured rate against the asynchronous limit [s]."""
        return 1.0 / self.f_s - self.period

    @property
    def timing_violation(self) -> bool:
        return self.f_s > self.f_s_max

    @property
    def boost(self) -> float:
        """Fractional sampling-rate gain of asynchronous over synchronous."""
        return self.f_s_max / self.f_s_max_sync - 1.0


def t_hard(tau: float, v_dd: float, a_v: float, p_meta: float, delta: float) -> float:
    """Comparison time that bounds the metastability rate at p_meta [s].

    t = tau * ln(2*v_dd / (a_v * p_meta * delta)); the residue left for the
    hardest comparison is uniform over one LSB, so the fraction of inputs
    still unresolved after t is exactly p_meta.
    """
    arg = 2.0 * v_dd / (a_v * p_meta * delta)
    if arg <= 1.0:
        raise ValueError(f"t_hard: log argument {arg:g} <= 1; target trivially met")
    return tau * math.log(arg)


def max_sampling_rate(t_easy: float, t_hard_: float, bits: int, t_fix: float,
                      t_delay: float, t_track: float) -> float:
    """Asynchronous rate limit: the budget terms fill one period [Hz]."""
    if min(t_easy, t_hard_, t_fix, t_delay, t_track) < 0:
        raise ValueError("max_sampling_rate: time components must be nonnegative")
    period = t_easy + t_hard_ + (bits - 1) * t_fix + bits * t_delay + t_track
    return 1.0 / period


def build_budget(cfg: AdcConfig) -> TimingBudget:
    d = derived_constants(cfg)
    th = t_hard(d.tau_reg, cfg.v_dd, cfg.a_v, cfg.p_meta, d.delta)
    te = t_easy_of(cfg.bits, d.tau_reg)
    f_async = max_sampling_rate(te, th, cfg.bits, cfg.t_fix, cfg.t_delay, cfg.t_track)
    slot = th + cfg.t_fix + cfg.t_delay
    f_sync = 1.0 / (cfg.bits * slot + cfg.t_track)
    return TimingBudget(
        tau_reg=d.tau_reg, t_hard=th, t_easy=te, t_fix=cfg.t_fix,
        t_delay=cfg.t_delay, t_track=cfg.t_track, bits=cfg.bits,
        f_s_max=f_async, f_s_max_sync=f_sync, f_s=cfg.f_s,
    )


def sync_async_comparison(cfg: AdcConfig, t_easy_override: float | None = None) -> float:
    """Fractional rate boost of the asynchronous schedule over a synchronous
    baseline that must allocate the worst comparison time to every bit."""
    d = derived_constants(cfg)
    th = t_hard(d.tau_reg, cfg.v_dd, cfg.a_v, cfg.p_meta, d.delta)
    te = t_easy_of(cfg.bits, d.tau_reg) if t_easy_override is None else t_easy_override
    f_async = max_sampling_rate(te, th, cfg.bits, cfg.t_fix, cfg.t_delay, cfg.t_track)
    f_sync = 1.0 / (cfg.bits * (th + cfg.t_fix + cfg.t_delay) + cfg.t_track)
    return f_async / f_sync - 1.0


def metastability_mc(cfg: AdcConfig, trials: int, p_meta_test: float,
                     seed: int = 0, shards: int = 1,
                     with_noise: bool = False) -> dict:
    """Empirical metastability rate at an inflated test target.

    Comparator inputs are drawn uniformly over one LSB centered on the
    decision threshold; a trial counts when the regeneration latency exceeds
    the settling time budgeted for rate p_meta_test.  Sharded draws merge
    deterministically regardless of shard count.
    """
    if trials < 10.0 / p_meta_test:
        raise ValueError(
            f"metastability_mc: need at least {10.0 / p_meta_test:.0f} trials "
            f"to resolve a rate of {p_meta_test:g}"
        )
    d = derived_constants(cfg)
    limit = t_hard(d.tau_reg, cfg.v_dd, cfg.a_v, p_meta_test, d.delta)
    counts = 0
    per_shard = [trials // shards + (1 if k < trials % shards else 0)
                 for k in range(shards)]
    for k, n in enumerate(per_shard):
        rng = np.random.default_rng(np.random.SeedSequence((seed, k)))
        v = rng.uniform(-d.delta / 2.0, d.delta / 2.0, size=n)
        if with_noise and cfg.sigma_n_comp > 0:
            v = v + rng.normal(0.0, cfg.sigma_n_comp, size=n)
        t = decision_latencies(np.abs(v), d.tau_reg, cfg.v_dd, cfg.a_v)
        counts += int(np.sum(t > limit))
    rate = counts / trials
    sigma = math.sqrt(max(rate * (1.0 - rate), p_meta_test) / trials)
    return {
        "trials": trials,
        "count": counts,
        "rate": rate,
        "target": p_meta_test,
        "ci95": (rate - 1.96 * sigma, rate + 1.96 * sigma),
        "t_limit": limit,
    }
