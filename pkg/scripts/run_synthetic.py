"""Baseline comparison on a preset environment.

Runs the ratio learner against the fixed maps and the learning baselines,
then prints the summary table. Writes the full output bundle (traces,
summary.json, oracle.json) under --output.
"""

import argparse
import sys

from dolrm.config import DEFAULT_NOISE_SIGMA, PRESETS, ExperimentConfig
from dolrm.env import DEFAULT_COST_FLOOR, EnvironmentSpec
from dolrm.oracle import brute_force_theta_star
from dolrm.policies import PolicyKind
from dolrm.runner import run_experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--preset", default="two-type-p08", choices=sorted(PRESETS))
    parser.add_argument("--horizon", type=int, default=100_000)
    parser.add_argument("--seeds", type=int, default=20, help="number of seeds, starting at 0")
    parser.add_argument("--sigma", type=float, default=DEFAULT_NOISE_SIGMA)
    parser.add_argument("--learning-rate", default="decaying", choices=("decaying", "fixed-sqrtT"))
    parser.add_argument("--output", default="results/synthetic")
    args = parser.parse_args()

    preset = PRESETS[args.preset]
    env = EnvironmentSpec(preset["arrival_probs"], preset["arms"], args.sigma, DEFAULT_COST_FLOOR)

    # Fixed baselines: the offline-optimal map and the per-task greedy map
    # (argmax of each type's own reward/cost ratio).
    optimal = brute_force_theta_star(env).policy.actions
    greedy = tuple(
        max(range(len(arms_s)), key=lambda a: arms_s[a][0] / arms_s[a][1])
        for arms_s in env.arms
    )
    policies = [
        PolicyKind("dolrm"),
        PolicyKind("ucb"),
        PolicyKind("ts"),
        PolicyKind("oracle-rm"),
        PolicyKind("fixed", greedy, "greedy"),
    ]
    if optimal != greedy:
        policies.append(PolicyKind("fixed", optimal, "optimal-map"))

    cfg = ExperimentConfig(
        environment=env,
        environment_name=args.preset,
        policies=tuple(policies),
        horizons=(args.horizon,),
        seeds=tuple(range(args.seeds)),
        lr_mode=args.learning_rate,
        output_dir=args.output,
        log_stride=None,
    )
    bundle = run_experiment(cfg)
    print(bundle.summary_table_path.read_text())
    print(f"outputs written to {bundle.output_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
