"""Query-time personalization: raise a handful of token probabilities to
contextual priors (username parts, password-reuse parts) without touching the
trained model.

A tweak sets one (dimension, token) to probability p; every other token on
that dimension is damped by (1 - delta_p) per tweak, delta_p = p - p0 with p0
the token's pre-tweak probability (0 if absent). That is the literal published
rule, and for p0 > 0 it leaves the dimension's total mass slightly off 1 (the
"exact" mode rescales by (1-p)/(1-p0) instead, restoring mass 1; it exists to
measure the gap, not as the default). All of it is O(#tweaks) per lookup —
the merged lists stay untouched, only the queried p* changes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decompose import DIMENSIONS, split3
from .model import Model

USERNAME_BASE_P = 0.02478
USERNAME_SUFFIX_P = 0.02570
REUSE_MASS = 0.22


@dataclass
class Tweak:
    dimension: str
    token: str
    p: float
    p0: float

    @property
    def delta_p(self) -> float:
        return self.p - self.p0


class TweakSet:
    """At most one tweak per (dimension, token); later additions replace
    earlier ones. Bound to the model whose p0 values it snapshotted."""

    def __init__(self, model: Model, mode: str = "paper"):
        if mode not in ("paper", "exact"):
            raise ValueError(f"unknown tweak mode {mode!r}")
        self.model = model
        self.mode = mode
        self.tweaks: dict[str, dict[str, Tweak]] = {d: {} for d in DIMENSIONS}

    def __len__(self) -> int:
        return sum(len(d) for d in self.tweaks.values())

    def add(self, dimension: str, token: str, p: float) -> None:
        if not (0.0 < p < 1.0):
            raise ValueError(f"tweak probability must be in (0, 1), got {p}")
        p0 = self.model.lookup(dimension, token) or 0.0
        self.tweaks[dimension][token] = Tweak(dimension, token, p, p0)

    def _damp(self, dimension: str) -> float:
        factor = 1.0
        for t in self.tweaks[dimension].values():
            if self.mode == "paper":
                factor *= 1.0 - t.delta_p
            else:
                factor *= (1.0 - t.p) / (1.0 - t.p0)
        return factor

    def lookup(self, dimension: str, token: str):
        """Tweaked token -> its p; otherwise the model's probability damped by
        this dimension's tweaks; absent stays absent."""
        t = self.tweaks[dimension].get(token)
        if t is not None:
            return t.p
        q = self.model.lookup(dimension, token)
        if q is None or not self.tweaks[dimension]:
            return q
        return q * self._damp(dimension)


def _add_if_raising(tweaks: TweakSet, dimension: str, token: str, p: float) -> None:
    """Context priors only ever pull a probability UP: a prior below the
    trained value is dropped, because applying it would make the estimate more
    optimistic about a personally-likely token — the unsafe direction for a
    strength meter."""
    p0 = tweaks.model.lookup(dimension, token) or 0.0
    if p > p0:
        tweaks.add(dimension, token, p)


def username_context(
    model: Model,
    email_or_name: str,
    base_p: float = USERNAME_BASE_P,
    suffix_p: float = USERNAME_SUFFIX_P,
    mode: str = "paper",
) -> TweakSet:
    """Priors from the account name: the name (the part before '@') splits
    like a password, its base and suffix become likely tokens. The prefix part
    is deliberately left alone — its observed match rate is noise-level."""
    tweaks = TweakSet(model, mode)
    name = email_or_name.split("@", 1)[0]
    if not name:
        return tweaks
    _, base, suffix = split3(name)
    if base:
        _add_if_raising(tweaks, "base", base.lower(), base_p)
    if suffix:
        _add_if_raising(tweaks, "suffix", suffix, suffix_p)
    return tweaks


def reuse_context(
    model: Model,
    history,
    reuse_mass: float = REUSE_MASS,
    mode: str = "paper",
) -> TweakSet:
    """Priors from the user's other known passwords: each history password's
    3D parts get mass reuse_mass * f_i; the same part appearing in several
    history entries accumulates its masses before the tweak is set."""
    tweaks = TweakSet(model, mode)
    masses: dict[tuple[str, str], float] = {}
    for password, freq in history:
        prefix, base, suffix = split3(password)
        for dimension, token in (("prefix", prefix), ("base", base.lower()), ("suffix", suffix)):
            if token:
                key = (dimension, token)
                masses[key] = masses.get(key, 0.0) + reuse_mass * freq
    for (dimension, token), p in masses.items():
        _add_if_raising(tweaks, dimension, token, p)
    return tweaks


def request_tweaks(
    model: Model,
    username: str | None = None,
    history=None,
    mode: str = "paper",
) -> TweakSet | None:
    """Combine the two context sources for one request. Where both want the
    same (dimension, token), the larger prior wins — the sources estimate the
    same event ("this token is personally likely") rather than independent
    ones, so their masses do not add."""
    if not username and not history:
        return None
    combined = TweakSet(model, mode)
    sources = []
    if username:
        sources.append(username_context(model, username, mode=mode))
    if history:
        sources.append(reuse_context(model, history, mode=mode))
    best: dict[tuple[str, str], float] = {}
    for source in sources:
        for dimension, per_dim in source.tweaks.items():
            for token, tweak in per_dim.items():
                key = (dimension, token)
                if tweak.p > best.get(key, 0.0):
                    best[key] = tweak.p
    for (dimension, token), p in best.items():
        _add_if_raising(combined, dimension, token, p)
    return combined


def exact_tweaked_distributions(model: Model, tweaks: TweakSet) -> dict[str, dict[str, float]]:
    """Materialize the full tweaked probability tables (model tokens plus
    tweak-introduced ones). Small models only — this is the slow path that
    lets an exact oracle measure what the constant-time rule actually did."""
    if model.dists is None:
        raise ValueError("model is not normalized")
    out: dict[str, dict[str, float]] = {}
    for dimension in DIMENSIONS:
        dist = model.dists[dimension]
        table = {token: tweaks.lookup(dimension, token) for token in dist.tokens}
        for token in tweaks.tweaks[dimension]:
            table[token] = tweaks.lookup(dimension, token)
        out[dimension] = table
    return out
