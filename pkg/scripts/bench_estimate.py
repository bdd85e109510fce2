"""Measure end-to-end estimation latency against a trained model directory.

Reports mean / p50 / p99 / max over N queries drawn from a corpus sample plus
random mutations (so the not-in-model path is exercised too).

Usage:
    python3 scripts/bench_estimate.py MODEL_DIR CORPUS [-n QUERIES] [--seed SEED]
"""

import argparse
import random
import time

from pesrank.model import Model
from pesrank.rank import estimate_password


def load_queries(corpus_path: str, n: int, rng: random.Random) -> list[str]:
    with open(corpus_path, "r", encoding="utf-8", errors="replace") as f:
        pool = [line.rstrip("\r\n").split("\t")[-1] for line in f][:200_000]
    queries = []
    for _ in range(n):
        pw = rng.choice(pool)
        roll = rng.random()
        if roll < 0.15:
            pw = pw + "zq"  # push part of the mix off-model
        elif roll < 0.25:
            pw = pw[::-1]
        queries.append(pw or "x")
    return queries


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("model_dir")
    ap.add_argument("corpus")
    ap.add_argument("-n", "--queries", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=2)
    args = ap.parse_args()

    model = Model.load(args.model_dir)
    if model.merged is None:
        ap.error("model has no merged lists; run `pesrank preprocess` first")
    rng = random.Random(args.seed)
    queries = load_queries(args.corpus, args.queries, rng)

    # warm up interpreter caches before timing
    for pw in queries[:50]:
        estimate_password(model, pw)

    timings = []
    ok = not_in_model = 0
    for pw in queries:
        t0 = time.perf_counter()
        est = estimate_password(model, pw)
        timings.append(time.perf_counter() - t0)
        if est.status == "ok":
            ok += 1
        else:
            not_in_model += 1

    timings.sort()
    n = len(timings)
    mean = sum(timings) / n
    print(f"queries        {n} (ok {ok}, not_in_model {not_in_model})")
    print(f"mean latency   {mean * 1e3:.3f} ms")
    print(f"p50            {timings[n // 2] * 1e3:.3f} ms")
    print(f"p99            {timings[int(n * 0.99)] * 1e3:.3f} ms")
    print(f"max            {timings[-1] * 1e3:.3f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
