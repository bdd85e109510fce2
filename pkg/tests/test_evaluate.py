"""Evaluator: log-ratio deltas, bucket rates, guessing-curve CDF, rank files."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pesrank.evaluate import (
    NOT_IN_MODEL_RANK,
    EvalError,
    bucket_rates,
    cdf,
    compare,
    delta,
    not_in_model_fraction,
    read_rank_file,
    write_curve,
    write_rank_file,
)


def test_delta_reference_examples():
    assert delta(10**8, 10**6) == 2.0
    assert delta(10**6, 10**8) == -2.0
    assert delta(7, 7) == 0.0


def test_delta_handles_huge_integer_ranks():
    assert math.isclose(delta(10**400, 10**398), 2.0, abs_tol=1e-9)


def test_delta_requires_positive_ranks():
    with pytest.raises(EvalError):
        delta(0, 5)
    with pytest.raises(EvalError):
        delta(5, NOT_IN_MODEL_RANK)


@given(st.integers(min_value=1, max_value=10**12), st.integers(min_value=1, max_value=10**12))
def test_delta_is_antisymmetric(a, b):
    assert math.isclose(delta(a, b), -delta(b, a), abs_tol=1e-12)


def test_bucket_rates_reference_examples():
    assert bucket_rates([3, 0, -3]) == (1 / 3, 1 / 3, 1 / 3)
    assert bucket_rates([2, -2]) == (0.0, 1.0, 0.0)  # closed interval
    assert bucket_rates([0]) == (0.0, 1.0, 0.0)


def test_bucket_rates_empty_is_an_error():
    with pytest.raises(EvalError):
        bucket_rates([])


@given(st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=50))
def test_bucket_rates_sum_to_one(deltas):
    over, accurate, under = bucket_rates(deltas)
    assert abs(over + accurate + under - 1.0) <= 1e-12


def test_cdf_reference_examples():
    points = cdf([10, 1000, NOT_IN_MODEL_RANK], [100])
    assert points == [(100, 1 / 3)]
    assert cdf([10, 1000], [5]) == [(5, 0.0)]
    # budget at/above the largest rank counts every in-model record
    points = cdf([10, 1000, NOT_IN_MODEL_RANK], [10**6])
    assert points == [(10**6, 2 / 3)]


def test_cdf_is_monotone_and_capped():
    ranks = [1, 5, 5, 80, 10**7, NOT_IN_MODEL_RANK, NOT_IN_MODEL_RANK]
    budgets = [1, 10, 100, 10**9]
    points = cdf(ranks, budgets)
    fracs = [f for _, f in points]
    assert fracs == sorted(fracs)
    in_model = 5 / 7
    assert all(f <= in_model + 1e-12 for f in fracs)


def test_cdf_empty_is_an_error():
    with pytest.raises(EvalError):
        cdf([], [10])


def test_not_in_model_fraction():
    assert not_in_model_fraction([1, 2, NOT_IN_MODEL_RANK, 4]) == 0.25
    assert not_in_model_fraction([1]) == 0.0


def test_compare_joins_and_excludes_sentinels():
    alg = {"a": 10**8, "b": 100, "c": NOT_IN_MODEL_RANK, "d": 50}
    ref = {"a": 10**6, "b": 100, "c": 7, "e": 9}
    result = compare(alg, ref)
    # joined ids: a (delta 2 -> accurate closed edge), b (0); c excluded; d/e unmatched
    assert result["compared"] == 2
    assert result["excluded_not_in_model"] == 1
    assert result["over"] == 0.0
    assert result["accurate"] == 1.0
    assert result["under"] == 0.0


def test_rank_file_round_trip(tmp_path):
    path = tmp_path / "ranks.tsv"
    ranks = {"pw1": 12, "pw2": 10**30, "pw3": NOT_IN_MODEL_RANK}
    write_rank_file(str(path), ranks)
    back = read_rank_file(str(path))
    assert back == ranks
    assert isinstance(back["pw2"], int)


def test_rank_file_rejects_malformed_rows(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("id1\t5\nid2\tfive\n")
    with pytest.raises(EvalError, match="2"):
        read_rank_file(str(path))
    path.write_text("id1\t0\n")
    with pytest.raises(EvalError):
        read_rank_file(str(path))
    path.write_text("only_one_field\n")
    with pytest.raises(EvalError):
        read_rank_file(str(path))


def test_curve_file_format(tmp_path):
    path = tmp_path / "curve.tsv"
    write_curve(str(path), [(1, 0.0), (100, 0.5), (10**6, 0.75)])
    lines = path.read_text().splitlines()
    assert lines[0] == "1\t0.0"
    assert lines[1] == "100\t0.5"
    assert lines[2] == "1000000\t0.75"
