"""Dataset container, bounds handling, CSV ingestion, synthetic draws."""

import math

import numpy as np
import pytest

from privcurator import (
    BoundsError,
    CsvFormatError,
    Dataset,
    DomainBounds,
    PreconditionError,
    load_csv,
    synthesize,
)
from privcurator.dataset import SYNTH_DISTRIBUTIONS, UNBOUNDED, encode_bound


def test_bounds_defaults_and_span():
    b = DomainBounds()
    assert not b.is_bounded
    assert b.span == math.inf
    b = DomainBounds(-2.0, 3.0)
    assert b.is_bounded
    assert b.span == 5.0


def test_bounds_validation():
    with pytest.raises(BoundsError):
        DomainBounds(2.0, 1.0)
    with pytest.raises(BoundsError):
        DomainBounds(math.nan, 1.0)
    with pytest.raises(BoundsError):
        DomainBounds(math.inf, math.inf)
    with pytest.raises(BoundsError):
        DomainBounds(-math.inf, -math.inf)
    # a degenerate single-point domain is legal
    assert DomainBounds(1.0, 1.0).span == 0.0


def test_bounds_from_strings_and_encoding():
    b = DomainBounds.from_strings("unbounded", "3.5")
    assert b.lower == -math.inf and b.upper == 3.5
    b = DomainBounds.from_strings("-1", "UNBOUNDED")
    assert b.lower == -1.0 and b.upper == math.inf
    assert encode_bound(math.inf) == UNBOUNDED
    assert encode_bound(-math.inf) == UNBOUNDED
    assert encode_bound(2.0) == 2.0
    with pytest.raises(BoundsError):
        DomainBounds.from_strings("abc", "1")
    assert DomainBounds(0, 1).to_json_dict() == {"lower": 0.0, "upper": 1.0}


def test_dataset_sorts_and_freezes():
    d = Dataset(np.array([3.0, 1.0, 2.0]), DomainBounds(0, 5))
    assert list(d.values) == [1.0, 2.0, 3.0]
    assert d.n == 3 and len(d) == 3
    with pytest.raises(ValueError):
        d.values[0] = 9.0


def test_dataset_rejects_bad_values():
    with pytest.raises(PreconditionError):
        Dataset(np.array([]), DomainBounds())
    with pytest.raises(PreconditionError):
        Dataset(np.array([[1.0, 2.0]]), DomainBounds())
    with pytest.raises(BoundsError):
        Dataset(np.array([1.0, math.nan]), DomainBounds())
    with pytest.raises(BoundsError):
        Dataset(np.array([1.0, math.inf]), DomainBounds())
    with pytest.raises(BoundsError):
        Dataset(np.array([1.0, 7.0]), DomainBounds(0, 5))
    with pytest.raises(BoundsError):
        Dataset(np.array([-0.5, 2.0]), DomainBounds(0, 5))


def test_load_csv_plain_and_header(tmp_path):
    plain = tmp_path / "plain.csv"
    plain.write_text("3\n1\n2\n")
    d = load_csv(plain, DomainBounds(0, 10))
    assert list(d.values) == [1.0, 2.0, 3.0]
    assert d.name == "plain.csv"

    headed = tmp_path / "headed.csv"
    headed.write_text("reading\n1.5\n\n2.5\n")  # blank line in the middle is skipped
    d = load_csv(headed, DomainBounds())
    assert list(d.values) == [1.5, 2.5]


def test_load_csv_reports_row_numbers(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0\n\noops\n3.0\n")
    with pytest.raises(CsvFormatError, match="row 3"):
        load_csv(bad, DomainBounds())

    oob = tmp_path / "oob.csv"
    oob.write_text("value\n1.0\n9.5\n")
    with pytest.raises(BoundsError, match="row 3"):
        load_csv(oob, DomainBounds(0, 5))


def test_load_csv_empty_inputs(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("\n\n")
    with pytest.raises(CsvFormatError):
        load_csv(empty, DomainBounds())
    header_only = tmp_path / "header_only.csv"
    header_only.write_text("value\n")
    with pytest.raises(CsvFormatError):
        load_csv(header_only, DomainBounds())


def test_synthesize_bounds_conventions():
    d = synthesize("uniform01", 9, 4)
    assert d.bounds == DomainBounds(0.0, 1.0)
    assert d.n == 9
    for dist in ("standard_normal", "exponential1"):
        d = synthesize(dist, 25, 4)
        assert d.bounds.lower == d.values.min()
        assert d.bounds.upper == d.values.max()


def test_synthesize_is_deterministic():
    for dist in SYNTH_DISTRIBUTIONS:
        a = synthesize(dist, 11, 7)
        b = synthesize(dist, 11, 7)
        assert np.array_equal(a.values, b.values)
        assert not np.array_equal(a.values, synthesize(dist, 11, 8).values)


def test_synthesize_rejects_bad_args():
    with pytest.raises(PreconditionError):
        synthesize("pareto", 5, 0)
    with pytest.raises(PreconditionError):
        synthesize("uniform01", 0, 0)
