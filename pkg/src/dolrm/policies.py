"""Decision policies: the double-optimistic ratio learner and its baselines.

Every policy exposes the same sequential interface: ``select(s)`` returns an
arm index for the arriving task type, ``update(s, a, reward, cost)`` ingests
that round's feedback. All argmax ties break toward the lowest arm index,
and every policy that learns from data pulls each unseen arm of an arriving
type once before trusting its estimates. Policies carrying a ratio iterate
expose it as ``theta``; for the others ``theta`` is None.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .env import EnvironmentSpec, derived_bounds
from .estimator import ArmStatistics, EstimatorConfig

LEARNING_RATE_MODES = ("decaying", "fixed-sqrtT")
POLICY_KINDS = ("dolrm", "fixed", "ucb", "ts", "oracle-rm")

_LABEL_RE = re.compile(r"^[A-Za-z0-9._-]+$")


@dataclass(frozen=True)
class PolicyMap:
    """Deterministic stationary policy: one arm index per task type."""

    actions: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(int(a) for a in self.actions))


def validate_policy_map(spec: EnvironmentSpec, pmap: PolicyMap) -> PolicyMap:
    if len(pmap.actions) != spec.num_types:
        raise ValueError(
            f"policy map has {len(pmap.actions)} actions for {spec.num_types} types"
        )
    for s, a in enumerate(pmap.actions):
        if not 0 <= a < len(spec.arms[s]):
            raise ValueError(
                f"actions[{s}] = {a} out of range for type {s} "
                f"with {len(spec.arms[s])} arms"
            )
    return pmap


def fixed_select(pmap: PolicyMap, s: int) -> int:
    """Arm assigned to type s by a fixed policy map."""
    if not 0 <= s < len(pmap.actions):
        raise IndexError(f"task type {s} out of range for map of {len(pmap.actions)} types")
    return pmap.actions[s]


@dataclass(frozen=True)
class LearningRateSchedule:
    """Step-size rule for the ratio iteration.

    "decaying" uses eta_t = 1 / (c_min * (t + 1)); "fixed-sqrtT" uses the
    horizon-tuned constant 1 / (c_min * sqrt(T)) at every round.
    """

    mode: str
    c_min: float
    horizon: int

    def __post_init__(self) -> None:
        if self.mode not in LEARNING_RATE_MODES:
            raise ValueError(
                f"unknown learning-rate mode {self.mode!r}; expected one of {LEARNING_RATE_MODES}"
            )
        if self.c_min <= 0.0:
            raise ValueError(f"c_min must be positive (got {self.c_min!r})")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1 (got {self.horizon})")


def learning_rate(schedule: LearningRateSchedule, t: int) -> float:
    """Step size at round t (1-based)."""
    if t < 1:
        raise ValueError(f"round index must be >= 1 (got {t})")
    if schedule.mode == "decaying":
        return 1.0 / (schedule.c_min * (t + 1))
    return 1.0 / (schedule.c_min * math.sqrt(schedule.horizon))


def ratio_step(
    theta: float,
    eta: float,
    r_hat: float,
    c_check: float,
    theta_min: float,
    theta_max: float,
) -> float:
    """One projected stochastic-approximation step toward the root of r - theta*c."""
    nxt = theta + eta * (r_hat - theta * c_check)
    if nxt < theta_min:
        return theta_min
    if nxt > theta_max:
        return theta_max
    return nxt


def greedy_arm(rewards: Sequence[float], costs: Sequence[float], theta: float) -> int:
    """Index maximizing rewards[a] - theta * costs[a]; ties go to the lowest index."""
    best = 0
    best_score = rewards[0] - theta * costs[0]
    for a in range(1, len(rewards)):
        score = rewards[a] - theta * costs[a]
        if score > best_score:
            best_score = score
            best = a
    return best


@dataclass(frozen=True)
class PolicyKind:
    """Config-level policy selector: which algorithm to run, with parameters.

    ``actions`` is meaningful only for kind "fixed" (one arm index per task
    type). ``label`` overrides the name used in traces and summaries.
    """

    kind: str
    actions: Optional[tuple[int, ...]] = None
    label: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in POLICY_KINDS:
            raise ValueError(
                f"unknown policy kind {self.kind!r}; expected one of {POLICY_KINDS}"
            )
        if self.kind == "fixed":
            if self.actions is None:
                raise ValueError("fixed policy needs 'actions' (one arm index per type)")
            object.__setattr__(self, "actions", tuple(int(a) for a in self.actions))
        elif self.actions is not None:
            raise ValueError(f"'actions' only applies to kind 'fixed', not {self.kind!r}")
        if self.label is not None and not _LABEL_RE.match(self.label):
            raise ValueError(
                f"label {self.label!r} may only contain letters, digits, '.', '_', '-'"
            )

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind == "fixed":
            return "fixed-" + "-".join(str(a) for a in self.actions)
        return self.kind


class DolRmPolicy:
    """Double-optimistic ratio learner.

    Keeps a running ratio iterate theta inside [theta_min, theta_max]. Each
    round it scores every arm of the arriving type with an optimistic reward
    UCB minus theta times a pessimistic cost LCB and plays the best score.
    On feedback it first moves theta one projected step toward the root of
    r_hat - theta * c_check, using the pre-update estimates of the played arm
    (the same ones the decision consumed), and only then folds the new
    observation into the empirical means.
    """

    def __init__(self, spec: EnvironmentSpec, horizon: int, lr_mode: str = "decaying"):
        bounds = derived_bounds(spec)
        self.bounds = bounds
        self.stats = ArmStatistics.for_spec(spec)
        self.cfg = EstimatorConfig(horizon, bounds.r_max, bounds.c_min)
        self.schedule = LearningRateSchedule(lr_mode, bounds.c_min, horizon)
        self.theta = bounds.theta_min
        self.round = 1
        self._log_horizon = self.cfg.bonus_numerator
        self._decaying = lr_mode == "decaying"
        self._fixed_eta = 1.0 / (bounds.c_min * math.sqrt(horizon))

    def select(self, s: int) -> int:
        if s < 0:
            raise IndexError(f"negative task type {s}")
        counts = self.stats.counts[s]
        for a, n in enumerate(counts):
            if n == 0:
                return a
        mean_r = self.stats.mean_rewards[s]
        mean_c = self.stats.mean_costs[s]
        log_t = self._log_horizon
        bounds = self.bounds
        r_max = bounds.r_max
        c_min = bounds.c_min
        theta = self.theta
        sqrt = math.sqrt
        best = 0
        best_score = -math.inf
        for a in range(len(counts)):
            bonus = sqrt(log_t / counts[a])
            r_hat = mean_r[a] + bonus
            if r_hat > r_max:
                r_hat = r_max
            c_check = mean_c[a] - bonus
            if c_check < c_min:
                c_check = c_min
            score = r_hat - theta * c_check
            if score > best_score:
                best_score = score
                best = a
        return best

    def update(self, s: int, a: int, reward: float, cost: float) -> None:
        stats = self.stats
        bounds = self.bounds
        n = stats.counts[s][a]
        if n == 0:
            r_hat = bounds.r_max
            c_check = bounds.c_min
        else:
            bonus = math.sqrt(self._log_horizon / n)
            r_hat = stats.mean_rewards[s][a] + bonus
            if r_hat > bounds.r_max:
                r_hat = bounds.r_max
            c_check = stats.mean_costs[s][a] - bonus
            if c_check < bounds.c_min:
                c_check = bounds.c_min
        t = self.round
        eta = 1.0 / (bounds.c_min * (t + 1)) if self._decaying else self._fixed_eta
        theta = self.theta + eta * (r_hat - self.theta * c_check)
        if theta < bounds.theta_min:
            theta = bounds.theta_min
        elif theta > bounds.theta_max:
            theta = bounds.theta_max
        self.theta = theta
        stats.record(s, a, reward, cost)
        self.round = t + 1


class FixedMapPolicy:
    """Plays a constant arm per type; no learning, no state."""

    theta = None

    def __init__(self, spec: EnvironmentSpec, pmap: PolicyMap):
        self.map = validate_policy_map(spec, pmap)

    def select(self, s: int) -> int:
        return fixed_select(self.map, s)

    def update(self, s: int, a: int, reward: float, cost: float) -> None:
        pass


def ucb_baseline_select(stats: ArmStatistics, s: int, t: int) -> int:
    """UCB1 pick among type s's arms from ratio-signal means.

    Unpulled arms are explored first (lowest index); otherwise plays the
    largest mean + sqrt(2 log t / N) with t the current round index.
    """
    if s < 0:
        raise IndexError(f"negative task type {s}")
    if t < 1:
        raise ValueError(f"round index must be >= 1 (got {t})")
    counts = stats.counts[s]
    for a, n in enumerate(counts):
        if n == 0:
            return a
    means = stats.mean_rewards[s]
    two_log_t = 2.0 * math.log(t)
    best = 0
    best_score = means[0] + math.sqrt(two_log_t / counts[0])
    for a in range(1, len(counts)):
        score = means[a] + math.sqrt(two_log_t / counts[a])
        if score > best_score:
            best_score = score
            best = a
    return best


class ClassicUcbPolicy:
    """UCB1 treating the per-sample reward/cost ratio as a scalar reward.

    Each feedback is reduced to the ratio signal rho = R / max(C, cost_floor),
    folded into per-arm means (stored in the reward slot of ArmStatistics),
    and arms are ranked by mean + sqrt(2 log t / N).
    """

    theta = None

    def __init__(self, spec: EnvironmentSpec):
        self.stats = ArmStatistics.for_spec(spec)
        self.cost_floor = spec.cost_floor
        self.round = 1

    def select(self, s: int) -> int:
        return ucb_baseline_select(self.stats, s, self.round)

    def update(self, s: int, a: int, reward: float, cost: float) -> None:
        denom = cost if cost > self.cost_floor else self.cost_floor
        self.stats.record(s, a, reward / denom, cost)
        self.round += 1


def ts_baseline_select(
    stats: ArmStatistics, s: int, c_min: float, rng: np.random.Generator
) -> int:
    """Thompson-sampling pick: best sampled ratio of Gaussian posterior draws.

    The posterior of each cell mean after N pulls is Normal(mean, 1/N) (unit
    noise variance, flat prior). Draw order is fixed: one vector of 2k
    standard normals per call, rewards in the first k slots, costs in the
    last k. Cost draws are clipped below at c_min before dividing.
    """
    if s < 0:
        raise IndexError(f"negative task type {s}")
    counts = stats.counts[s]
    for a, n in enumerate(counts):
        if n == 0:
            return a
    k = len(counts)
    mean_r = stats.mean_rewards[s]
    mean_c = stats.mean_costs[s]
    z = rng.standard_normal(2 * k)
    best = 0
    best_score = -math.inf
    for a in range(k):
        sd = 1.0 / math.sqrt(counts[a])
        c_draw = mean_c[a] + sd * z[k + a]
        if c_draw < c_min:
            c_draw = c_min
        score = (mean_r[a] + sd * z[a]) / c_draw
        if score > best_score:
            best_score = score
            best = a
    return best


class ThompsonSamplingPolicy:
    """Independent Gaussian posteriors on every cell's mean reward and cost."""

    theta = None

    def __init__(self, spec: EnvironmentSpec, rng: np.random.Generator):
        self.stats = ArmStatistics.for_spec(spec)
        self.c_min = derived_bounds(spec).c_min
        self.rng = rng

    def select(self, s: int) -> int:
        return ts_baseline_select(self.stats, s, self.c_min, self.rng)

    def update(self, s: int, a: int, reward: float, cost: float) -> None:
        self.stats.record(s, a, reward, cost)


class OracleRmPolicy:
    """Ratio iteration driven by the true means (no estimation).

    Decisions and theta updates both use the exact (r, c) of the played arm;
    sampled feedback is ignored. Shares the learning-rate schedule with the
    learner it benchmarks, isolating the effect of estimation error.
    """

    def __init__(self, spec: EnvironmentSpec, horizon: int, lr_mode: str = "decaying"):
        bounds = derived_bounds(spec)
        self.bounds = bounds
        self.arms = spec.arms
        self.schedule = LearningRateSchedule(lr_mode, bounds.c_min, horizon)
        self.theta = bounds.theta_min
        self.round = 1
        self._decaying = lr_mode == "decaying"
        self._fixed_eta = 1.0 / (bounds.c_min * math.sqrt(horizon))

    def select(self, s: int) -> int:
        if s < 0:
            raise IndexError(f"negative task type {s}")
        arms_s = self.arms[s]
        theta = self.theta
        best = 0
        best_score = arms_s[0][0] - theta * arms_s[0][1]
        for a in range(1, len(arms_s)):
            score = arms_s[a][0] - theta * arms_s[a][1]
            if score > best_score:
                best_score = score
                best = a
        return best

    def update(self, s: int, a: int, reward: float, cost: float) -> None:
        r, c = self.arms[s][a]
        bounds = self.bounds
        t = self.round
        eta = 1.0 / (bounds.c_min * (t + 1)) if self._decaying else self._fixed_eta
        theta = self.theta + eta * (r - self.theta * c)
        if theta < bounds.theta_min:
            theta = bounds.theta_min
        elif theta > bounds.theta_max:
            theta = bounds.theta_max
        self.theta = theta
        self.round = t + 1


def make_policy(
    kind: PolicyKind,
    spec: EnvironmentSpec,
    horizon: int,
    lr_mode: str,
    rng: np.random.Generator,
):
    """Instantiate the policy described by ``kind`` for one episode."""
    if kind.kind == "dolrm":
        return DolRmPolicy(spec, horizon, lr_mode)
    if kind.kind == "fixed":
        return FixedMapPolicy(spec, PolicyMap(kind.actions))
    if kind.kind == "ucb":
        return ClassicUcbPolicy(spec)
    if kind.kind == "ts":
        return ThompsonSamplingPolicy(spec, rng)
    return OracleRmPolicy(spec, horizon, lr_mode)
