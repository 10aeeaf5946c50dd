"""Shared fixtures built on the synthetic corpus helpers."""

import pytest

from corpus_helpers import build_corpus, write_ground_truth_csv, write_predictions_csv


@pytest.fixture
def synthetic_corpus():
    return build_corpus()


@pytest.fixture
def corpus_files(tmp_path, synthetic_corpus):
    records, truth = synthetic_corpus
    pred = write_predictions_csv(tmp_path / "predictions.csv", records)
    gt = write_ground_truth_csv(tmp_path / "ground_truth.csv", truth)
    return pred, gt
