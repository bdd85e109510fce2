"""Explainer: classification thresholds, people counts, message rendering."""

import math

from pesrank import estimate_password, preprocess
from pesrank.explain import (
    NOT_IN_MODEL,
    PGS_NOT_IN_MODEL,
    STRONG,
    SUB_OPTIMAL,
    VERDICT_COLORS,
    WEAK,
    classify,
    explain,
    render_message,
)
from pesrank.model import Model, TrainConfig


def two_password_model():
    m = Model(TrainConfig(enrichment=False))
    m.train_lines(["password1", "password123"])
    m.normalize()
    return m


def test_classification_reference_points():
    assert classify(14.14) == WEAK
    assert classify(32) == SUB_OPTIMAL
    assert classify(50.0) == SUB_OPTIMAL


def test_classification_boundaries():
    assert classify(29.999999) == WEAK
    assert classify(30.0) == SUB_OPTIMAL
    assert classify(50.000001) == STRONG
    assert classify(0.0) == WEAK


def test_classification_is_monotone():
    order = {WEAK: 0, SUB_OPTIMAL: 1, STRONG: 2}
    previous = -1
    for bits in [x / 4 for x in range(0, 400)]:
        current = order[classify(bits)]
        assert current >= previous
        previous = current


def test_verdict_colors():
    assert VERDICT_COLORS[WEAK] == "red"
    assert VERDICT_COLORS[SUB_OPTIMAL] == "yellow"
    assert VERDICT_COLORS[STRONG] == "green"
    assert VERDICT_COLORS[NOT_IN_MODEL] == "gray"


def test_two_password_reference_explanation():
    m = two_password_model()
    preprocess(m, gamma=1.09)
    est = estimate_password(m, "password1")
    exp = explain(m, "password1", est)
    by_dim = {r.dimension: r for r in exp.dimensions}
    assert by_dim["base"].token == "password"
    assert by_dim["base"].probability == 1.0
    assert by_dim["base"].people_count == 2
    assert by_dim["suffix"].token == "1"
    assert by_dim["suffix"].probability == 0.5
    assert by_dim["suffix"].people_count == 1
    assert exp.pgs_compatible == exp.rank_lower


def test_enrichment_only_token_reports_zero_people():
    m = Model(TrainConfig(min_length=4))
    m.train_lines(["pass123word"])
    m.enrich()
    m.normalize()
    preprocess(m, gamma=1.09)
    est = estimate_password(m, "000000")
    if est.status == "ok":
        exp = explain(m, "000000", est)
        by_dim = {r.dimension: r for r in exp.dimensions}
        assert by_dim["base"].people_count == 0


def test_message_contains_required_facts():
    m = two_password_model()
    preprocess(m, gamma=1.09)
    est = estimate_password(m, "password1")
    exp = explain(m, "password1", est)
    msg = render_message(exp, m.training_population)
    assert exp.classification in msg
    assert f"{exp.bits_lower:.0f} bits" in msg
    assert "2" in msg  # population
    assert "password" in msg
    assert "used by 2 people" in msg
    assert "suffix '1'" in msg
    assert "used by 1 person" in msg


def test_message_omits_empty_dimensions():
    m = two_password_model()
    preprocess(m, gamma=1.09)
    est = estimate_password(m, "password1")
    exp = explain(m, "password1", est)
    msg = render_message(exp, m.training_population)
    assert "prefix" not in msg
    assert "capital" not in msg.lower() or exp.dimensions[3].token != "[]"
    assert "l33t" not in msg


def test_message_mentions_only_own_tokens():
    m = Model(TrainConfig(enrichment=False))
    m.train_lines(["password1", "password123", "dragonfire88"])
    m.normalize()
    preprocess(m, gamma=1.09)
    est = estimate_password(m, "password1")
    exp = explain(m, "password1", est)
    msg = render_message(exp, m.training_population)
    assert "dragonfire" not in msg


def test_not_in_model_explanation():
    m = two_password_model()
    preprocess(m, gamma=1.09)
    est = estimate_password(m, "zzzunknownzzz")
    exp = explain(m, "zzzunknownzzz", est)
    assert exp.classification == NOT_IN_MODEL
    assert exp.missing_dimension == "base"
    assert exp.pgs_compatible == PGS_NOT_IN_MODEL == -5
    msg = render_message(exp, m.training_population)
    assert "not found" in msg
    assert "base" in msg


def test_message_is_deterministic():
    m = two_password_model()
    preprocess(m, gamma=1.09)
    est = estimate_password(m, "password123")
    exp = explain(m, "password123", est)
    assert render_message(exp, 2) == render_message(exp, 2)


def test_classification_uses_lower_bits():
    m = two_password_model()
    preprocess(m, gamma=1.09)
    est = estimate_password(m, "password1")
    exp = explain(m, "password1", est)
    assert exp.classification == classify(exp.bits_lower)
    assert math.isclose(exp.bits_lower, math.log2(est.bounds.lower))
