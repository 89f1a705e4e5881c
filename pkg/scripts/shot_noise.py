"""Shot-noise study: feature error against the exact backend vs. shot count.

The error should fall as 1/sqrt(shots); the last column compares the measured
mean absolute error with the binomial prediction.

    python3 scripts/shot_noise.py --dim 3 --rows 50
"""
import argparse

import numpy as np

from qchange.features import EncodingConfig, FeatureBackend, project


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--rows", type=int, default=50)
    ap.add_argument("--shots", type=int, nargs="+", default=[256, 1024, 4096, 8192, 16384, 65536])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = EncodingConfig()
    xs = np.random.default_rng(args.seed).standard_normal((args.rows, args.dim))
    exact = np.array([project(x, cfg) for x in xs])
    # E|c_hat - c| for a binomial mean of +-1 outcomes, halved, in the normal limit
    sd = 0.5 * np.sqrt(1 - (2 * exact) ** 2)
    print(f"{'shots':>6} {'MAE':>9} {'predicted':>9} {'ratio':>6}")
    for shots in args.shots:
        backend = FeatureBackend(shots, seed=args.seed)
        noisy = np.array([project(x, cfg, backend, row=i) for i, x in enumerate(xs)])
        mae = np.abs(noisy - exact).mean()
        pred = np.mean(sd * np.sqrt(2 / np.pi) / np.sqrt(shots))
        print(f"{shots:>6} {mae:>9.5f} {pred:>9.5f} {mae / pred:>6.3f}")


if __name__ == "__main__":
    main()
