"""Rank estimation engine.

The model induces a product population: one item per 5-tuple of tokens, with
probability ((p1*p2)*(p3*p4))*p5 evaluated in exactly that association order
everywhere (engine, oracles, query paths), so all routes see bit-identical
float64 values. A password's rank is its position in the descending-probability
guess order; ties make that a range, so queries return integer bounds:

    lower <= #{items > p*} + 1   and   upper >= #{items >= p*}

which sandwich every position the password can occupy among equal-probability
items. Exact counting is infeasible at scale (volume is the product of the
five dimension sizes), so the engine keeps *staircase sketches*: per retained
probability value v, a certified lower bound lo on #{items >= v} and a
certified upper bound hi on #{items > v}. Five dimension sketches are merged
offline into two (prefix x base, suffix x shift, then the pair; l33t stays
separate), and a query reads only those two — the shape, file format, and
gamma^(2d-2) accuracy contract of the exponential-sampling approach, with the
bookkeeping done on the count axis instead of on probability buckets: geometric
bucketing alone cannot separate two near-equal probabilities sharing a bucket,
which breaks the advertised ratio exactly where random small models are most
likely to land.

Counts are Python ints end to end (volumes overflow 64 bits long before the
probabilities underflow); numpy carries only the float values for sorting,
products, and binary search.
"""

from __future__ import annotations

import heapq
import math
import struct
from dataclasses import dataclass

import numpy as np

from .decompose import DIMENSIONS, decompose, parse_pattern_token, recompose
from .model import Model, ModelError

BRUTE_FORCE_VOLUME_CAP = 10**7
ENUMERATE_CAP = 10**6

# Sketch-size policy. Intermediates get resampled so the next merge's event
# count (product of the two entry counts) stays small; the final sketch is
# never merged again, so it may stay an order of magnitude longer — and below
# these thresholds nothing is resampled at all, which keeps small models
# (every acceptance-scale model, M0 included) fully exact.
INTERMEDIATE_MAX_ENTRIES = 4096
FINAL_MAX_ENTRIES = 16384
MERGE_EVENT_CAP = 4_000_000

_I64_MAX = 2**63 - 1
MERGED_MAGIC = b"PESR"
MERGED_VERSION = 1


class ParameterError(ValueError):
    """A query or configuration value outside its documented domain."""


@dataclass
class RankBounds:
    lower: int
    upper: int

    @property
    def bits_lower(self) -> float:
        return math.log2(self.lower)

    @property
    def bits_upper(self) -> float:
        return math.log2(self.upper)


class Sketch:
    """Two-sided staircase over a population of float64 probabilities.

    values: strictly decreasing float64 array of retained probabilities.
    lo[k]:  certified lower bound on #{items >= values[k]} (exact for sketches
            that were never resampled).
    hi[k]:  certified upper bound on #{items > values[k]}.
    total:  population size N.

    Invariants: hi[0] == 0 and values[0] is the population maximum; lo[-1] ==
    total; lo and hi are non-decreasing. Downsampling keeps geometrically
    spaced ranks, so consecutive entries satisfy hi[k+1] <= gamma * lo[k]; each
    merge multiplies that tightness factor of its inputs, and each resample
    multiplies it by another gamma. With the ((1x2)x(3x4), 5) plan and at most
    one resample per intermediate plus one on the final list, a query's
    upper/lower ratio is bounded by gamma^(2d-2) = gamma^8 for d = 5.
    """

    __slots__ = ("values", "lo", "hi", "total")

    def __init__(self, values: np.ndarray, lo: list[int], hi: list[int], total: int):
        self.values = values
        self.lo = lo
        self.hi = hi
        self.total = total

    def __len__(self) -> int:
        return len(self.lo)


def downsample(probs, gamma: float) -> Sketch:
    """Sketch one dimension: geometrically sample ranks 1, ~gamma, ~gamma^2...
    of the descending-sorted probabilities (first and last always kept) and
    record exact lo/hi counts for each retained value."""
    if gamma <= 1.0:
        raise ParameterError(f"gamma must exceed 1, got {gamma}")
    arr = np.sort(np.asarray(probs, dtype=np.float64))[::-1]
    n = len(arr)
    if n == 0:
        raise ParameterError("cannot sketch an empty distribution")
    ranks = [1]
    r = 1
    while r < n:
        r = min(n, max(r + 1, math.ceil(gamma * r)))
        ranks.append(r)
    values = np.unique(arr[np.asarray(ranks) - 1])[::-1]
    asc = arr[::-1]
    lo = (n - np.searchsorted(asc, values, side="left")).tolist()
    hi = (n - np.searchsorted(asc, values, side="right")).tolist()
    return Sketch(values, [int(v) for v in lo], [int(v) for v in hi], n)


def _lead_lo(s: Sketch) -> list[int]:
    return [s.lo[0]] + [s.lo[k] - s.lo[k - 1] for k in range(1, len(s))]


def _trail_hi(s: Sketch) -> list[int]:
    m = len(s)
    return [s.hi[k + 1] - s.hi[k] for k in range(m - 1)] + [s.total - s.hi[m - 1]]


def merge(a: Sketch, b: Sketch) -> Sketch:
    """Merge two sketches into one over the pairwise-product population.

    Every pairwise product fl(vA[k] * vB[l]) is a candidate value. Sweeping
    candidates in descending order: a pair of lo-slabs (items newly counted at
    entry k of A, resp. l of B) has all its products >= the candidate, so the
    lo event applies at the candidate value inclusively; a pair of hi-slabs
    has all its products <= the candidate, so it can only contribute to counts
    *strictly below* it, and its event applies after the candidate's own group.
    Both accumulated sums are then certified bounds at every candidate, and
    the first/last candidates inherit the max-value and total-count anchors.
    """
    ma, mb = len(a), len(b)
    total = a.total * b.total
    v = (a.values[:, None] * b.values[None, :]).ravel()
    order = np.argsort(-v, kind="stable")
    vs = v[order]
    boundary = np.flatnonzero(np.diff(vs))
    group_start = np.concatenate(([0], boundary + 1))
    group_end = np.append(boundary, len(vs) - 1)

    if total < 2**62:
        lead = np.outer(
            np.asarray(_lead_lo(a), dtype=np.int64), np.asarray(_lead_lo(b), dtype=np.int64)
        ).ravel()[order]
        trail = np.outer(
            np.asarray(_trail_hi(a), dtype=np.int64), np.asarray(_trail_hi(b), dtype=np.int64)
        ).ravel()[order]
        cum_lo = np.cumsum(lead)
        cum_hi = np.cumsum(trail)
        lo = [int(x) for x in cum_lo[group_end]]
        hi = [0] + [int(x) for x in cum_hi[group_end[:-1]]]
    else:
        # Arbitrary-precision path for volumes beyond int64.
        lead_a, lead_b = _lead_lo(a), _lead_lo(b)
        trail_a, trail_b = _trail_hi(a), _trail_hi(b)
        ka, lb = np.divmod(order, mb)
        lo, hi = [], []
        lo_sum = 0
        hi_sum = 0
        pending = 0
        pos = 0
        for start, end in zip(group_start, group_end):
            hi_sum += pending
            pending = 0
            for i in range(start, end + 1):
                k = int(ka[i])
                l = int(lb[i])
                lo_sum += lead_a[k] * lead_b[l]
                pending += trail_a[k] * trail_b[l]
            lo.append(lo_sum)
            hi.append(hi_sum)
            pos = end + 1
        assert pos == len(vs)

    return Sketch(vs[group_start], lo, hi, total)


def resample(s: Sketch, gamma: float) -> Sketch:
    """Thin a sketch to geometrically spaced lo counts (first and last entries
    always survive). Costs one extra gamma factor in the tightness budget."""
    m = len(s)
    if m <= 2:
        return s
    keep = [0]
    last_lo = s.lo[0]
    for j in range(1, m - 1):
        if s.lo[j] > gamma * last_lo:
            keep.append(j)
            last_lo = s.lo[j]
    keep.append(m - 1)
    idx = np.asarray(keep)
    return Sketch(s.values[idx], [s.lo[j] for j in keep], [s.hi[j] for j in keep], s.total)


@dataclass
class MergedLists:
    """The two precomputed lists a query needs: A covers the first four
    dimensions, B the fifth (l33t)."""

    gamma: float
    a: Sketch
    b: Sketch

    @property
    def volume(self) -> int:
        return self.a.total * self.b.total

    def entry_count(self) -> int:
        return len(self.a) + len(self.b)


def preprocess(model: Model, gamma: float) -> MergedLists:
    """Build the two merged lists: X = prefix x base, Y = suffix x shift,
    A = X x Y, B = l33t. Intermediates are resampled only when long enough to
    matter, so small models stay exact end to end."""
    if model.dists is None:
        raise ModelError("model is not normalized")
    if gamma <= 1.0:
        raise ParameterError(f"gamma must exceed 1, got {gamma}")
    sketches = [downsample(model.dists[dim].probs, gamma) for dim in DIMENSIONS]
    x = merge(sketches[0], sketches[1])
    if len(x) > INTERMEDIATE_MAX_ENTRIES:
        x = resample(x, gamma)
    y = merge(sketches[2], sketches[3])
    if len(y) > INTERMEDIATE_MAX_ENTRIES:
        y = resample(y, gamma)
    # An unresampled pair can still be jointly too wide for one merge pass;
    # thin the longer side first (this is that side's single resample).
    while len(x) * len(y) > MERGE_EVENT_CAP:
        if len(x) >= len(y):
            x = resample(x, gamma)
        else:
            y = resample(y, gamma)
    a = merge(x, y)
    if len(a) > FINAL_MAX_ENTRIES:
        a = resample(a, gamma)
    merged = MergedLists(gamma, a, sketches[4])
    model.merged = merged
    model.gamma = gamma
    return merged


def estimate_rank(merged: MergedLists, p_star: float) -> RankBounds:
    """Bound the rank of probability p_star from the two merged lists.

    For each B entry l the comparisons run over the full fl(vA * vB[l]) row,
    exactly the floats the population carries, so no division ever enters.
    The strict staircase (> p_star) feeds the lower bound, which therefore
    bounds the best tie position; the inclusive staircase (>= p_star) feeds
    the upper bound, covering the worst tie position.
    """
    if not (0.0 < p_star <= 1.0):
        raise ParameterError(f"p_star must be in (0, 1], got {p_star}")
    a, b = merged.a, merged.b
    ma = len(a)
    a_asc = a.values[::-1]
    lead_lo_b = _lead_lo(b)
    trail_hi_b = _trail_hi(b)
    lb = 0
    ub = 0
    for l in range(len(b)):
        row_asc = a_asc * b.values[l]
        k_strict = ma - int(np.searchsorted(row_asc, p_star, side="right"))
        k_incl = ma - int(np.searchsorted(row_asc, p_star, side="left"))
        if k_strict >= 1:
            lb += lead_lo_b[l] * a.lo[k_strict - 1]
        ub += trail_hi_b[l] * (a.hi[k_incl] if k_incl < ma else a.total)
    volume = merged.volume
    lower = min(lb + 1, volume)
    upper = min(max(ub, lower), volume)
    return RankBounds(lower, upper)


def estimate_rank_batch(merged: MergedLists, p_stars: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized estimate_rank over an array of queries (oracle-scale helper;
    requires the volume to fit comfortably in int64)."""
    volume = merged.volume
    if volume >= 2**62:
        raise ParameterError("batch path needs an int64-sized volume")
    qs = np.asarray(p_stars, dtype=np.float64)
    a, b = merged.a, merged.b
    ma = len(a)
    a_asc = a.values[::-1]
    lo_ext = np.concatenate(([0], np.asarray(a.lo, dtype=np.int64)))
    cap_ext = np.concatenate((np.asarray(a.hi, dtype=np.int64), [a.total]))
    lead_lo_b = _lead_lo(b)
    trail_hi_b = _trail_hi(b)
    lb = np.zeros(len(qs), dtype=np.int64)
    ub = np.zeros(len(qs), dtype=np.int64)
    for l in range(len(b)):
        row_asc = a_asc * b.values[l]
        k_strict = ma - np.searchsorted(row_asc, qs, side="right")
        k_incl = ma - np.searchsorted(row_asc, qs, side="left")
        lb += lead_lo_b[l] * lo_ext[k_strict]
        ub += trail_hi_b[l] * cap_ext[k_incl]
    lower = np.minimum(lb + 1, volume)
    upper = np.minimum(np.maximum(ub, lower), volume)
    return lower, upper


# -- probability and end-to-end estimation --------------------------------


def _product(p1: float, p2: float, p3: float, p4: float, p5: float) -> float:
    # The one association order used everywhere.
    return ((p1 * p2) * (p3 * p4)) * p5


def password_probability(model: Model, password: str, tweaks=None):
    """Decompose and price a password. Returns (p_star, None) or, when some
    token is unknown, (None, first missing dimension)."""
    lookup = tweaks.lookup if tweaks is not None else model.lookup
    tokens = decompose(password).tokens()
    probs = []
    for dim in DIMENSIONS:
        p = lookup(dim, tokens[dim])
        if p is None:
            return None, dim
        probs.append(p)
    return _product(*probs), None


@dataclass
class DivisionCounter:
    """Observability hook: counts prefix/base/suffix divisions examined on the
    all-digits path."""

    evaluations: int = 0


@dataclass
class PasswordEstimate:
    status: str  # "ok" | "not_in_model"
    p_star: float | None = None
    bounds: RankBounds | None = None
    tokens: dict | None = None
    missing_dimension: str | None = None
    division: tuple | None = None


def _digit_division(model: Model, password: str, tweaks, counter):
    """All-digits passwords: every split into prefix/base/suffix is a
    legitimate reading, so examine all (l+1)(l+2)/2 of them and keep the
    in-model division with the highest probability (first such split wins
    ties). The empty pattern probabilities are shared by every division."""
    lookup = tweaks.lookup if tweaks is not None else model.lookup
    p_shift = lookup("shift", "[]")
    p_leet = lookup("leet", "[]")
    length = len(password)
    best = None
    best_parts = None
    for i in range(length + 1):
        for j in range(i, length + 1):
            if counter is not None:
                counter.evaluations += 1
            p1 = lookup("prefix", password[:i])
            p2 = lookup("base", password[i:j])
            p3 = lookup("suffix", password[j:])
            if None in (p1, p2, p3, p_shift, p_leet):
                continue
            p = _product(p1, p2, p3, p_shift, p_leet)
            if best is None or p > best:
                best = p
                best_parts = (i, j)
    if best is None:
        if p_shift is None:
            missing = "shift"
        elif p_leet is None:
            missing = "leet"
        else:
            missing = "base"
        return PasswordEstimate(status="not_in_model", missing_dimension=missing)
    i, j = best_parts
    tokens = {
        "prefix": password[:i],
        "base": password[i:j],
        "suffix": password[j:],
        "shift": "[]",
        "leet": "[]",
    }
    return PasswordEstimate(
        status="ok", p_star=best, tokens=tokens, division=best_parts
    )


def estimate_password(model: Model, password: str, tweaks=None, counter=None) -> PasswordEstimate:
    """Full query path: decompose (or divide, for all-digits input), price,
    and bound the rank against the precomputed merged lists."""
    if not password:
        raise ParameterError("password must be non-empty")
    if model.merged is None:
        raise ModelError("model has no merged lists; run preprocess first")
    if password.isascii() and password.isdigit():
        est = _digit_division(model, password, tweaks, counter)
    else:
        p_star, missing = password_probability(model, password, tweaks)
        if p_star is None:
            est = PasswordEstimate(status="not_in_model", missing_dimension=missing)
        else:
            est = PasswordEstimate(
                status="ok", p_star=p_star, tokens=decompose(password).tokens()
            )
    if est.status == "ok":
        est.bounds = estimate_rank(model.merged, est.p_star)
    return est


# -- exact oracles ---------------------------------------------------------


def population_products(model: Model) -> np.ndarray:
    """The full product population as float64, built with the engine's exact
    association order. Guarded: this is a verification tool, not a scale path."""
    if model.dists is None:
        raise ModelError("model is not normalized")
    if model.volume() > BRUTE_FORCE_VOLUME_CAP:
        raise ParameterError(
            f"volume {model.volume()} exceeds the brute-force cap {BRUTE_FORCE_VOLUME_CAP}"
        )
    p1, p2, p3, p4, p5 = (
        np.asarray(model.dists[dim].probs, dtype=np.float64) for dim in DIMENSIONS
    )
    a = np.outer(p1, p2).ravel()
    b = np.outer(p3, p4).ravel()
    ab = np.outer(a, b).ravel()
    return np.outer(ab, p5).ravel()


def brute_force_rank(model: Model, p_star: float) -> int:
    """Exact rank oracle: #{5-tuples with product >= p_star}, ties included."""
    return int(np.count_nonzero(population_products(model) >= p_star))


def enumerate_passwords(model: Model, limit: int):
    """Best-first enumeration of recomposed passwords in non-increasing
    probability order (the optimal cracker this engine ranks against).

    Ties emit in deterministic lexicographic index order, indices taken over
    each dimension sorted by probability descending then token ascending.
    Distinct tuples recomposing to the same string are emitted as-is: the
    modeled cracker cannot tell them apart either.
    """
    if limit > ENUMERATE_CAP:
        raise ParameterError(f"enumeration limit {limit} exceeds the cap {ENUMERATE_CAP}")
    if model.dists is None:
        raise ModelError("model is not normalized")
    dims = []
    for dim in DIMENSIONS:
        dist = model.dists[dim]
        entries = sorted(zip(dist.probs, dist.tokens), key=lambda e: (-e[0], e[1]))
        dims.append(entries)
    sizes = [len(d) for d in dims]

    def node_prob(idx):
        return _product(*(dims[axis][i][0] for axis, i in enumerate(idx)))

    start = (0, 0, 0, 0, 0)
    heap = [(-node_prob(start), start)]
    seen = {start}
    emitted = 0
    while heap and emitted < limit:
        neg_p, idx = heapq.heappop(heap)
        tokens = [dims[axis][i][1] for axis, i in enumerate(idx)]
        password = recompose(
            tokens[0],
            tokens[1],
            tokens[2],
            parse_pattern_token(tokens[3]),
            parse_pattern_token(tokens[4]),
        )
        yield password, -neg_p
        emitted += 1
        for axis in range(5):
            if idx[axis] + 1 < sizes[axis]:
                nxt = idx[:axis] + (idx[axis] + 1,) + idx[axis + 1 :]
                if nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(heap, (-node_prob(nxt), nxt))


# -- persistence -----------------------------------------------------------


def save_merged(merged: MergedLists, path: str) -> None:
    """Write the two lists: magic, version u32, gamma f64, d u32, then per
    list a u64 pair count followed by (i64, f64) pairs — each sketch entry
    contributes its (lo, value) and (hi, value) pair. Bit-exact round trip."""
    out = bytearray()
    out += MERGED_MAGIC
    out += struct.pack("<IdI", MERGED_VERSION, merged.gamma, len(DIMENSIONS))
    for s in (merged.a, merged.b):
        out += struct.pack("<Q", 2 * len(s))
        for k in range(len(s)):
            if s.lo[k] > _I64_MAX or s.hi[k] > _I64_MAX:
                raise ModelError(
                    "merged-list counts exceed the on-disk i64 range; "
                    "this model is too large for the current format"
                )
            v = float(s.values[k])
            out += struct.pack("<qdqd", s.lo[k], v, s.hi[k], v)
    with open(path, "wb") as f:
        f.write(out)


def load_merged(path: str) -> MergedLists:
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:4] != MERGED_MAGIC:
        raise ModelError(f"{path}: bad magic; not a merged-lists file")
    try:
        version, gamma, d = struct.unpack_from("<IdI", blob, 4)
        if version != MERGED_VERSION:
            raise ModelError(f"{path}: unsupported merged-lists version {version}")
        if d != len(DIMENSIONS):
            raise ModelError(f"{path}: dimension count {d} does not match this engine")
        offset = 4 + struct.calcsize("<IdI")
        sketches = []
        for _ in range(2):
            (pairs,) = struct.unpack_from("<Q", blob, offset)
            offset += 8
            if pairs % 2 != 0:
                raise ModelError(f"{path}: truncated histogram (odd pair count)")
            m = pairs // 2
            values = np.empty(m, dtype=np.float64)
            lo = []
            hi = []
            for k in range(m):
                lo_k, v1, hi_k, v2 = struct.unpack_from("<qdqd", blob, offset)
                offset += 32
                if v1 != v2:
                    raise ModelError(f"{path}: corrupt entry (value pair mismatch)")
                values[k] = v1
                lo.append(lo_k)
                hi.append(hi_k)
            if m == 0:
                raise ModelError(f"{path}: empty histogram")
            sketches.append(Sketch(values, lo, hi, lo[-1]))
    except struct.error:
        raise ModelError(f"{path}: truncated merged-lists file") from None
    if offset != len(blob):
        raise ModelError(f"{path}: trailing bytes after the two histograms")
    return MergedLists(gamma, sketches[0], sketches[1])
