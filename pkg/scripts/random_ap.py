"""Mean AP of uniformly random rankings, by simulation and in closed form."""

import argparse

import numpy as np

from cmmac.evaluation import RankedResult, average_precision, minimum_average_precision


def exact_mean(n, p):
    harmonic = sum(1 / i for i in range(1, n + 1))
    return (p - 1) / (n - 1) + (n - p) / (n - 1) * harmonic / n


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shuffles", type=int, default=10_000)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'N':>4} {'P':>3} {'prevalence':>10} {'simulated':>10} {'exact':>8} {'minimum':>8}")
    for n, p in ((100, 10), (30, 3), (17, 3), (110, 10)):
        ids = [f"x{i}" for i in range(n)]
        pos = set(ids[:p])
        sims = [average_precision(RankedResult("m", list(rng.permutation(ids)), pos)) for _ in range(args.shuffles)]
        print(f"{n:>4} {p:>3} {p / n:>10.3f} {np.mean(sims):>10.4f} {exact_mean(n, p):>8.4f} "
              f"{minimum_average_precision(n, p):>8.4f}")


if __name__ == "__main__":
    main()
