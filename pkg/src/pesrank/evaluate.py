"""Batch evaluation: guessing-curve CDFs and estimator-vs-reference metrics.

Rank files are TSV `id TAB rank`, with -5 standing for not-in-model. Deltas
are order-of-magnitude differences log10(g_alg / g_ref); a record only has a
delta when both sides produced a real rank, and the over/accurate/under split
uses the closed band -2 <= delta <= 2 for "accurate".
"""

from __future__ import annotations

import math

NOT_IN_MODEL_RANK = -5


class EvalError(ValueError):
    """Malformed rank files or empty metric inputs."""


def delta(g_alg: int, g_ref: int) -> float:
    """log10(g_alg / g_ref), computed big-int-safely; positive = over-estimate."""
    if g_alg < 1 or g_ref < 1:
        raise EvalError("delta needs both ranks >= 1")
    return math.log10(g_alg) - math.log10(g_ref)


def bucket_rates(deltas) -> tuple[float, float, float]:
    """(over, accurate, under) fractions of the defined deltas."""
    deltas = list(deltas)
    if not deltas:
        raise EvalError("no records with a defined delta")
    n = len(deltas)
    over = sum(1 for d in deltas if d > 2.0)
    under = sum(1 for d in deltas if d < -2.0)
    return over / n, (n - over - under) / n, under / n


def compare(alg: dict, ref: dict) -> dict:
    """Join two id -> rank maps and tally the delta buckets. Records missing
    from either file, or not-in-model on either side, are excluded from the
    deltas and counted separately."""
    deltas = []
    excluded = 0
    for pid, g_alg in alg.items():
        if pid not in ref:
            continue
        g_ref = ref[pid]
        if g_alg == NOT_IN_MODEL_RANK or g_ref == NOT_IN_MODEL_RANK:
            excluded += 1
            continue
        deltas.append(delta(g_alg, g_ref))
    over, accurate, under = bucket_rates(deltas)
    return {
        "over": over,
        "accurate": accurate,
        "under": under,
        "compared": len(deltas),
        "excluded_not_in_model": excluded,
    }


def cdf(ranks, budgets) -> list[tuple[int, float]]:
    """Guessing curve: fraction of the whole test set crackable within each
    budget. A not-in-model rank is never crackable but stays in the
    denominator; callers pass the guaranteed (upper) rank bound."""
    ranks = list(ranks)
    if not ranks:
        raise EvalError("empty rank list")
    points = []
    for budget in budgets:
        cracked = sum(1 for r in ranks if r != NOT_IN_MODEL_RANK and r <= budget)
        points.append((budget, cracked / len(ranks)))
    return points


def not_in_model_fraction(ranks) -> float:
    ranks = list(ranks)
    if not ranks:
        raise EvalError("empty rank list")
    return sum(1 for r in ranks if r == NOT_IN_MODEL_RANK) / len(ranks)


def read_rank_file(path: str) -> dict:
    """Parse `id TAB rank` lines; ranks are arbitrary-precision integers."""
    ranks: dict = {}
    with open(path, "r", encoding="utf-8") as f:
        for n, line in enumerate(f, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise EvalError(f"{path} line {n}: expected 'id<TAB>rank'")
            try:
                rank = int(parts[1])
            except ValueError:
                raise EvalError(f"{path} line {n}: rank {parts[1]!r} is not an integer") from None
            if rank < 1 and rank != NOT_IN_MODEL_RANK:
                raise EvalError(f"{path} line {n}: rank must be >= 1 or the -5 sentinel")
            ranks[parts[0]] = rank
    return ranks


def write_rank_file(path: str, ranks: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        for pid, rank in ranks.items():
            f.write(f"{pid}\t{rank}\n")


def write_curve(path: str, points) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        for budget, fraction in points:
            f.write(f"{budget}\t{fraction!r}\n")
