import numpy as np
import pytest

from keydyn.stats import EmptyDatasetError, dataset_stats, five_number_summary, stats_csv
from keydyn.dataset import Dataset
from keydyn.synthetic import synth_population


def test_degenerate_distribution():
    s = five_number_summary([500] * 8, "adult")
    assert s.q1 == s.median == s.q3 == 500
    assert s.whisker_low == s.whisker_high == 500
    assert s.outliers == ()


def test_linear_interpolation_quartiles():
    s = five_number_summary([1, 2, 3, 4, 5])
    assert s.median == 3
    # R-7 rule on sorted data of length 5
    assert s.q1 == np.quantile([1, 2, 3, 4, 5], 0.25) == 2.0
    assert s.q3 == 4.0


def test_outlier_detection():
    s = five_number_summary([10, 11, 12, 13, 14, 100])
    assert 100 in s.outliers
    assert s.whisker_high < 100


def test_dataset_stats_groups_and_spread():
    d = synth_population("turkish", 15, 15, seed=5)
    summaries = {s.age_group: s for s in dataset_stats(d)}
    assert set(summaries) == {"adult", "child"}
    adult_iqr = summaries["adult"].q3 - summaries["adult"].q1
    child_iqr = summaries["child"].q3 - summaries["child"].q1
    assert adult_iqr < child_iqr  # adults condensed, children scattered
    csv = stats_csv(list(summaries.values()))
    assert csv.splitlines()[0].startswith("age_group,count,min")
    assert len(csv.splitlines()) == 3


def test_empty_dataset_errors():
    with pytest.raises(EmptyDatasetError):
        dataset_stats(Dataset(phrase_id="turkish", samples=[]))
    with pytest.raises(EmptyDatasetError):
        five_number_summary([])
