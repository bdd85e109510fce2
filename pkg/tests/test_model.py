"""Model store: ingestion filters, counting semantics, enrichment, persistence."""

import io
import math
import random
import time

import pytest

from pesrank.model import (
    DimensionDistribution,
    IngestError,
    Model,
    ModelError,
    TrainConfig,
    iter_corpus_lines,
    train,
)


def model_from_lines(lines, **config_kwargs):
    config_kwargs.setdefault("enrichment", False)
    m = Model(TrainConfig(**config_kwargs))
    m.train_lines(lines)
    m.normalize()
    return m


def test_two_password_reference_counts():
    m = model_from_lines(["password1", "password123"])
    assert m.counts["base"] == {"password": 2}
    assert m.counts["suffix"] == {"1": 1, "123": 1}
    assert m.counts["prefix"] == {"": 2}
    assert m.counts["shift"] == {"[]": 2}
    assert m.counts["leet"] == {"[]": 2}
    assert m.training_population == 2
    assert m.lookup("base", "password") == 1.0
    assert m.lookup("suffix", "1") == 0.5


def test_username_column_is_discarded():
    plain = model_from_lines(["password1", "password123"])
    tabbed = model_from_lines(["alice\tpassword1", "bob\tpassword123"])
    assert tabbed.counts == plain.counts
    assert tabbed.training_population == 2


def test_short_passwords_are_skipped_and_counted():
    m = model_from_lines(["short1", "password1"])
    assert m.training_population == 1
    assert m.skipped.length == 1
    assert m.skipped.charset == 0
    assert m.skipped.total == 1


def test_non_ascii_passwords_are_skipped_and_counted():
    m = model_from_lines(["pässword99", "password1", "tab\tin\tpassw12"])
    # the tabbed line splits at the FIRST tab: password "in\tpassw12" has a tab
    assert m.skipped.charset == 2
    assert m.training_population == 1


def test_ascii_filter_can_be_disabled():
    m = Model(TrainConfig(enrichment=False, ascii_only=False, min_length=4))
    m.train_lines(["password1", "cafépass"])
    m.normalize()
    assert m.training_population == 2
    assert m.skipped.charset == 0


def test_multiset_semantics_duplicates_count():
    m = model_from_lines(["password1", "password1", "password1"])
    assert m.counts["base"] == {"password": 3}
    assert m.training_population == 3


def test_training_is_order_insensitive():
    lines = [f"baseword{i}{i}" for i in range(40)] + ["password123"] * 5
    shuffled = lines[:]
    random.Random(7).shuffle(shuffled)
    a = model_from_lines(lines)
    b = model_from_lines(shuffled)
    for dim in a.counts:
        assert a.counts[dim] == b.counts[dim]
        assert a.dists[dim].tokens == b.dists[dim].tokens
        assert a.dists[dim].probs == b.dists[dim].probs


def test_probabilities_sum_to_one():
    m = model_from_lines(["password1", "dragonfire88", "K1ttyC@t!2019"])
    for dim in ("prefix", "base", "suffix", "shift", "leet"):
        assert math.isclose(math.fsum(m.dists[dim].probs), 1.0, rel_tol=0, abs_tol=1e-12)


def test_enrichment_token_counts_and_epsilon():
    m = Model()
    m.enrich()
    assert len(m.counts["prefix"]) == 11_110
    assert len(m.counts["suffix"]) == 11_110
    assert len(m.counts["base"]) == 1_000_000
    assert m.counts["prefix"]["007"] == 0.5
    assert m.counts["suffix"]["1"] == 0.5
    assert m.counts["base"]["000042"] == 0.5
    assert "12345" not in m.counts["prefix"]  # affix enrichment stops at length 4
    assert "12345" not in m.counts["base"]  # base enrichment is exactly length 6


def test_enrichment_adds_to_existing_counts():
    m = Model(TrainConfig(min_length=4))
    m.train_lines(["123pass", "123pass"])
    assert m.counts["prefix"]["123"] == 2
    m.enrich()
    assert m.counts["prefix"]["123"] == 2.5


def test_enriching_twice_is_an_error():
    m = Model()
    m.enrich()
    with pytest.raises(ModelError):
        m.enrich()


def test_empty_dimension_fails_normalize():
    m = Model()
    with pytest.raises(ModelError, match="prefix"):
        m.normalize()


def test_stats_shape_and_volume(m0):
    s = m0.stats()
    assert s["tokens"] == {"prefix": 2, "base": 3, "suffix": 2, "shift": 2, "leet": 1}
    assert sum(s["tokens"].values()) == 10
    assert s["volume"] == 24
    assert s["gamma"] == 1.09


def test_save_load_round_trip_is_bit_exact(tmp_path):
    m = model_from_lines(["password1", "password123", "dragonfire88", "K1ttyC@t!2019"])
    d = tmp_path / "model"
    m.save(str(d))
    back = Model.load(str(d))
    assert back.training_population == m.training_population
    assert back.gamma == m.gamma
    assert back.enrichment_applied == m.enrichment_applied
    for dim in m.dists:
        assert back.dists[dim].tokens == m.dists[dim].tokens
        assert back.dists[dim].counts == m.dists[dim].counts
        assert back.dists[dim].probs == m.dists[dim].probs


def test_load_names_the_missing_dimension_file(tmp_path):
    m = model_from_lines(["password1", "password123"])
    d = tmp_path / "model"
    m.save(str(d))
    (d / "leet.tsv").unlink()
    with pytest.raises(ModelError, match="leet"):
        Model.load(str(d))


def test_load_missing_meta(tmp_path):
    with pytest.raises(ModelError, match="meta"):
        Model.load(str(tmp_path))


def test_load_rejects_unknown_version(tmp_path):
    m = model_from_lines(["password1", "password123"])
    d = tmp_path / "model"
    m.save(str(d))
    meta = (d / "meta.txt").read_text()
    (d / "meta.txt").write_text(meta.replace("version = 1", "version = 99"))
    with pytest.raises(ModelError, match="version"):
        Model.load(str(d))


def test_load_rejects_malformed_rows(tmp_path):
    m = model_from_lines(["password1", "password123"])
    d = tmp_path / "model"
    m.save(str(d))
    (d / "base.tsv").write_text("password\tnot_a_number\t0.5\n")
    with pytest.raises(ModelError, match="base.tsv"):
        Model.load(str(d))


def test_corpus_decode_errors_carry_line_numbers():
    stream = io.BytesIO("password1\n".encode() + b"\xff\xfe broken\n" + "password123\n".encode())
    with pytest.raises(IngestError) as err:
        list(iter_corpus_lines(stream, name="corpus"))
    assert err.value.line_number == 2


def test_train_from_file(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("password1\npassword123\nshort\n")
    m = train(str(corpus), TrainConfig(enrichment=False))
    assert m.training_population == 2
    assert m.skipped.length == 1


def test_people_strips_enrichment_mass():
    m = Model(TrainConfig(min_length=4))
    m.train_lines(["123pass", "123pass"])
    m.enrich()
    m.normalize()
    assert m.people("prefix", "123") == 2  # trained 2 + epsilon 0.5 floors to 2
    assert m.people("prefix", "999") == 0  # enrichment-only mass is not a person
    assert m.people("base", "zzzz") == 0  # absent token


def test_distribution_lookup_contract():
    dist = DimensionDistribution.from_counts({"b": 2.0, "a": 1.0, "c": 1.0})
    assert dist.tokens == ["a", "b", "c"]
    assert dist.lookup("b") == 0.5
    assert dist.lookup("missing") is None
    assert dist.count("a") == 1.0
    assert len(dist) == 3


def test_training_throughput_linear_in_corpus_size(tmp_path):
    # Per-line cost is constant, so a 10x corpus should train in ~10x the
    # time. Best-of-two runs per leg damps scheduler/GC noise.
    from conftest import load_script

    gen = load_script("gen_corpus")
    small = tmp_path / "small.txt"
    large = tmp_path / "large.txt"
    gen.write_corpus(str(small), 100_000, seed=31)
    gen.write_corpus(str(large), 1_000_000, seed=32)

    def train_seconds(path):
        best = math.inf
        for _ in range(2):
            m = Model(TrainConfig())
            t0 = time.perf_counter()
            with open(path, "rb") as f:
                m.train_lines(iter_corpus_lines(f, str(path)))
            best = min(best, time.perf_counter() - t0)
        return best

    ratio = train_seconds(large) / train_seconds(small)
    assert 8.0 <= ratio <= 12.0, f"1M/100k train-time ratio {ratio:.2f}"
