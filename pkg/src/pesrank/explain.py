"""Classification and human-readable feedback for a rank estimate.

Strength classes follow the 30/50-bit cut points (closed interval for the
middle class), applied to the conservative lower bits. The per-dimension
feedback reports how many trained passwords used each of the queried
password's own tokens — enrichment mass is not a person, so fractional counts
floor away to 0 for tokens nobody actually used.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .decompose import decompose
from .model import Model
from .rank import PasswordEstimate, RankBounds

WEAK = "weak"
SUB_OPTIMAL = "sub-optimal"
STRONG = "strong"
NOT_IN_MODEL = "not_in_model"

PGS_NOT_IN_MODEL = -5

VERDICT_COLORS = {
    WEAK: "red",
    SUB_OPTIMAL: "yellow",
    STRONG: "green",
    NOT_IN_MODEL: "gray",
}

_EMPTY_TOKENS = ("", "[]")


def classify(bits: float) -> str:
    if bits < 30.0:
        return WEAK
    if bits <= 50.0:
        return SUB_OPTIMAL
    return STRONG


@dataclass
class DimensionReport:
    dimension: str
    token: str
    probability: float
    people_count: int


@dataclass
class Explanation:
    classification: str
    rank_lower: int | None = None
    rank_upper: int | None = None
    bits_lower: float | None = None
    bits_upper: float | None = None
    dimensions: list = field(default_factory=list)
    missing_dimension: str | None = None

    @property
    def pgs_compatible(self) -> int:
        if self.classification == NOT_IN_MODEL:
            return PGS_NOT_IN_MODEL
        return self.rank_lower


def explain(model: Model, password: str, result) -> Explanation:
    """Build the explanation for an estimate.

    `result` is the PasswordEstimate from the query path (preferred: it knows
    which division an all-digits password actually priced), a bare RankBounds
    (tokens fall back to the canonical decomposition), or None for a password
    that was not in the model.
    """
    if isinstance(result, PasswordEstimate):
        if result.status == "not_in_model":
            return Explanation(
                classification=NOT_IN_MODEL, missing_dimension=result.missing_dimension
            )
        bounds = result.bounds
        tokens = result.tokens
    elif isinstance(result, RankBounds):
        bounds = result
        tokens = decompose(password).tokens()
    elif result is None:
        return Explanation(classification=NOT_IN_MODEL)
    else:
        raise TypeError(f"cannot explain a {type(result).__name__}")

    reports = []
    for dimension, token in tokens.items():
        probability = model.lookup(dimension, token) or 0.0
        reports.append(
            DimensionReport(dimension, token, probability, model.people(dimension, token))
        )
    bits_lower = bounds.bits_lower
    return Explanation(
        classification=classify(bits_lower),
        rank_lower=bounds.lower,
        rank_upper=bounds.upper,
        bits_lower=bits_lower,
        bits_upper=bounds.bits_upper,
        dimensions=reports,
    )


def _people(count: int) -> str:
    return "1 person" if count == 1 else f"{count} people"


def render_message(explanation: Explanation, population: int) -> str:
    """Deterministic feedback text: strength sentence first, then one sentence
    per non-empty dimension of the queried password."""
    if explanation.classification == NOT_IN_MODEL:
        missing = explanation.missing_dimension or "base"
        return (
            f"This password was not found in the model (no match in the "
            f"{missing} dimension), so no rank estimate is available."
        )
    parts = [
        f"Your password strength is {explanation.bits_lower:.0f} bits, which is "
        f"considered {explanation.classification}, based on {population} leaked passwords."
    ]
    by_dim = {r.dimension: r for r in explanation.dimensions}
    base = by_dim.get("base")
    if base is not None:
        parts.append(f"It uses the base word '{base.token}', used by {_people(base.people_count)}.")
    prefix = by_dim.get("prefix")
    if prefix is not None and prefix.token not in _EMPTY_TOKENS:
        parts.append(
            f"It uses the prefix '{prefix.token}', used by {_people(prefix.people_count)}."
        )
    suffix = by_dim.get("suffix")
    if suffix is not None and suffix.token not in _EMPTY_TOKENS:
        parts.append(
            f"It uses a suffix '{suffix.token}', used by {_people(suffix.people_count)}."
        )
    shift = by_dim.get("shift")
    if shift is not None and shift.token not in _EMPTY_TOKENS:
        parts.append(
            f"Its capitalization pattern {shift.token} was used by "
            f"{_people(shift.people_count)}."
        )
    leet = by_dim.get("leet")
    if leet is not None and leet.token not in _EMPTY_TOKENS:
        parts.append(
            f"Its l33t substitution pattern {leet.token} was used by "
            f"{_people(leet.people_count)}."
        )
    return " ".join(parts)
