"""Compare the realized mean community average degree with the closed-form law

    E(k) = 2m + mean_size * inter_p / n_communities

for BA(m=1) normal communities joined by dual-preferential interconnection.
"""

import argparse
import math

import numpy as np

from cmmac.netgen import GeneratorSpec, GroupParams, generate


def realized(n_comm, lo, hi, inter_p, seed):
    sizes = np.random.default_rng(np.random.SeedSequence([seed, 11])).integers(lo, hi + 1, size=n_comm).tolist()
    ds = generate(GeneratorSpec(GroupParams("barabasi_albert", sizes, 1, inter_p), GroupParams("erdos_renyi"), seed))
    g = ds.network
    per_comm = [np.mean([g.degree(v) for v in m]) for m in ds.partitions.values()]
    return float(np.mean(per_comm)), 2 + float(np.mean(sizes)) * inter_p / n_comm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=30)
    ap.add_argument("--inter-p", type=float, default=0.075)
    args = ap.parse_args()
    for n_comm, lo, hi in ((20, 30, 100), (110, 50, 990)):
        pairs = [realized(n_comm, lo, hi, args.inter_p, s) for s in range(args.seeds)]
        got = np.array([p[0] for p in pairs])
        law = float(np.mean([p[1] for p in pairs]))
        se = got.std(ddof=1) / math.sqrt(len(got))
        print(f"{n_comm:>4} communities, sizes {lo}-{hi}: realized {got.mean():.4f} ± {se:.4f}  law {law:.4f}  "
              f"gap {(got.mean() - law) / se:+.1f} SE")


if __name__ == "__main__":
    main()
