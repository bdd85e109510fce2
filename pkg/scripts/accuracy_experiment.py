"""How tight are the rank bounds in practice, as a function of gamma?

Builds models over random small populations, estimates every in-volume
probability, and reports the worst and mean upper/lower ratio per gamma next
to the theoretical gamma^8 ceiling. Output is a TSV on stdout.

Usage:
    python3 scripts/accuracy_experiment.py [--models N] [--max-dim K] [--gammas LIST]
"""

import argparse

import numpy as np

from pesrank.model import model_from_distributions
from pesrank.rank import estimate_rank_batch, population_products, preprocess


def random_model(rng, max_dim):
    dims = {}
    names = {
        "prefix": lambda i: "" if i == 0 else str(i),
        "base": lambda i: f"w{i}",
        "suffix": lambda i: "" if i == 0 else str(i) * 2,
        "shift": lambda i: f"[{i}]" if i else "[]",
        "leet": lambda i: f"[{i + 1}]" if i else "[]",
    }
    for dim, name in names.items():
        n = int(rng.integers(1, max_dim + 1))
        weights = rng.random(n) + 1e-3
        dims[dim] = {name(i): float(weights[i]) for i in range(n)}
    return model_from_distributions(dims)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--models", type=int, default=40)
    ap.add_argument("--max-dim", type=int, default=10)
    ap.add_argument("--gammas", default="1.05,1.09,1.2,1.5")
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()

    gammas = [float(g) for g in args.gammas.split(",")]
    rng = np.random.default_rng(args.seed)
    models = [random_model(rng, args.max_dim) for _ in range(args.models)]

    print("gamma\tceiling\tmax_ratio\tmean_ratio\tsandwich_violations")
    for gamma in gammas:
        worst = 1.0
        total = 0.0
        count = 0
        violations = 0
        for model in models:
            preprocess(model, gamma=gamma)
            products = population_products(model)
            qs = np.unique(products)
            lowers, uppers = estimate_rank_batch(model.merged, qs)
            asc = np.sort(products)
            true_ranks = len(asc) - np.searchsorted(asc, qs, side="left")
            violations += int(np.count_nonzero((lowers > true_ranks) | (true_ranks > uppers)))
            ratios = uppers / lowers
            worst = max(worst, float(ratios.max()))
            total += float(ratios.sum())
            count += len(ratios)
        print(f"{gamma}\t{gamma**8:.6f}\t{worst:.6f}\t{total / count:.6f}\t{violations}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
