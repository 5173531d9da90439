"""Task arrival and bandit-feedback model for reward/cost scheduling.

An environment is a finite set of task types with known arrival
probabilities; each type carries its own finite set of arms (decisions),
and every arm has a mean reward and a strictly positive mean cost.
Observations are the means corrupted by additive Gaussian noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_COST_FLOOR = 1e-6


class Feedback(NamedTuple):
    """One round of bandit feedback for the chosen arm."""

    reward: float
    cost: float


@dataclass(frozen=True)
class EnvironmentSpec:
    """Immutable description of a scheduling environment.

    Args:
        arrival_probs: probability of each task type; must sum to 1.
        arms: per type, a non-empty tuple of (mean_reward, mean_cost) pairs.
        noise_sigma: standard deviation of the additive Gaussian noise
            applied to both reward and cost samples.
        cost_floor: small positive constant guarding denominators wherever a
            noisy cost sample is divided by (see the ratio-signal baseline).
    """

    arrival_probs: tuple[float, ...]
    arms: tuple[tuple[tuple[float, float], ...], ...]
    noise_sigma: float = 1.0
    cost_floor: float = DEFAULT_COST_FLOOR

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "arrival_probs", tuple(float(p) for p in self.arrival_probs)
        )
        object.__setattr__(
            self,
            "arms",
            tuple(
                tuple((float(r), float(c)) for r, c in arms_s) for arms_s in self.arms
            ),
        )

    @property
    def num_types(self) -> int:
        return len(self.arrival_probs)

    def num_arms(self, s: int) -> int:
        return len(self.arms[s])


@dataclass(frozen=True)
class DerivedBounds:
    """Extremes of the mean rewards/costs and the induced ratio interval.

    theta_min = r_min / c_max and theta_max = r_max / c_min bracket every
    achievable expected reward-to-cost ratio; the ratio iteration is
    initialized at theta_min and projected onto [theta_min, theta_max].
    """

    r_min: float
    r_max: float
    c_min: float
    c_max: float
    theta_min: float
    theta_max: float


def validate_env(spec: EnvironmentSpec) -> EnvironmentSpec:
    """Check structural invariants, returning the spec unchanged if valid.

    Raises:
        ValueError: naming the offending field and index.
    """
    if spec.num_types == 0:
        raise ValueError("arrival_probs must be non-empty")
    if len(spec.arms) != spec.num_types:
        raise ValueError(
            f"arms has {len(spec.arms)} entries but arrival_probs has {spec.num_types}"
        )
    for s, p in enumerate(spec.arrival_probs):
        if not math.isfinite(p) or p < 0.0:
            raise ValueError(f"arrival_probs[{s}] = {p!r} must be finite and >= 0")
    total = math.fsum(spec.arrival_probs)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"arrival_probs sum {total:g} != 1")
    for s, arms_s in enumerate(spec.arms):
        if len(arms_s) == 0:
            raise ValueError(f"arms[{s}] must contain at least one arm")
        for a, (r, c) in enumerate(arms_s):
            if not math.isfinite(r):
                raise ValueError(f"arms[{s}][{a}]: mean_reward must be finite")
            if not math.isfinite(c) or c <= 0.0:
                raise ValueError(
                    f"arms[{s}][{a}]: mean_cost must be positive (got {c:g})"
                )
    if not math.isfinite(spec.noise_sigma) or spec.noise_sigma < 0.0:
        raise ValueError(f"noise_sigma must be >= 0 (got {spec.noise_sigma!r})")
    if not math.isfinite(spec.cost_floor) or spec.cost_floor <= 0.0:
        raise ValueError(f"cost_floor must be positive (got {spec.cost_floor!r})")
    return spec


def derived_bounds(spec: EnvironmentSpec) -> DerivedBounds:
    """Min/max of the mean rewards and costs over all (type, arm) cells."""
    rewards = [r for arms_s in spec.arms for (r, _) in arms_s]
    costs = [c for arms_s in spec.arms for (_, c) in arms_s]
    r_min, r_max = min(rewards), max(rewards)
    c_min, c_max = min(costs), max(costs)
    return DerivedBounds(r_min, r_max, c_min, c_max, r_min / c_max, r_max / c_min)


def sample_task(spec: EnvironmentSpec, rng: np.random.Generator) -> int:
    """Draw one task type by inverse CDF.

    Returns the first index whose cumulative probability strictly exceeds a
    single uniform draw, which makes arrival sequences reproducible across
    implementations sharing the uniform stream.
    """
    u = rng.random()
    acc = 0.0
    for s, p in enumerate(spec.arrival_probs):
        acc += p
        if acc > u:
            return s
    # accumulated rounding can leave the last cumulative at 1 - ulp
    return spec.num_types - 1


def sample_tasks(spec: EnvironmentSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized sample_task: n types from n uniforms, same stream order."""
    cum = np.cumsum(spec.arrival_probs)
    draws = rng.random(n)
    idx = np.searchsorted(cum, draws, side="right")
    return np.minimum(idx, spec.num_types - 1).astype(np.int64)


def _arm_means(spec: EnvironmentSpec, s: int, a: int) -> tuple[float, float]:
    if not 0 <= s < spec.num_types:
        raise IndexError(f"task type {s} out of range for {spec.num_types} types")
    arms_s = spec.arms[s]
    if not 0 <= a < len(arms_s):
        raise IndexError(f"arm {a} out of range for type {s} with {len(arms_s)} arms")
    return arms_s[a]


def sample_feedback(
    spec: EnvironmentSpec, s: int, a: int, rng: np.random.Generator
) -> Feedback:
    """Sample noisy (reward, cost) feedback for arm a of type s.

    Consumes exactly two standard normals per call (reward noise first, then
    cost noise) so the stream position depends only on the number of calls;
    sigma = 0 returns the exact means and consumes no randomness.
    """
    r, c = _arm_means(spec, s, a)
    sigma = spec.noise_sigma
    if sigma == 0.0:
        return Feedback(r, c)
    g = rng.standard_normal(2)
    return Feedback(r + sigma * g[0], c + sigma * g[1])


def sample_feedback_batch(
    spec: EnvironmentSpec, s: int, a: int, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """n independent draws for one cell, matching n sequential sample_feedback calls."""
    r, c = _arm_means(spec, s, a)
    if spec.noise_sigma == 0.0:
        return np.full(n, r), np.full(n, c)
    g = rng.standard_normal((n, 2))
    return r + spec.noise_sigma * g[:, 0], c + spec.noise_sigma * g[:, 1]
