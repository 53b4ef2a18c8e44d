import math

import numpy as np
import pytest

from btbd.analysis import (
    coding_gain,
    read_rd_csv,
    report_residual_statistics,
    residual_statistics,
    sequence_stats,
    write_rd_csv,
)
from btbd.codec.frames import pad_frame
from btbd.core.exceptions import InputError
from btbd.ddl.analysis import RdPoint, ResidualStatistics
from btbd.ddl.coding import FrameType
from btbd.ddl.frames import Sequence
from btbd.ddl.stream import FrameReport


def _sequence(*values: int) -> Sequence:
    return Sequence(tuple(pad_frame(np.full((10, 20), value, dtype=np.uint8)) for value in values))


def _report(zeros: int, coded: int, max_rank: int) -> FrameReport:
    return FrameReport(0, FrameType.I, 64, (), None, zeros, coded, max_rank)


def test_residual_statistics() -> None:
    ranks = np.array([[0, 0, 3], [1, 0, 9]])
    dontcare = np.array([[False, False, False], [False, True, True]])

    assert residual_statistics(ranks) == ResidualStatistics(0.5, 9, 6)
    assert residual_statistics(ranks, dontcare) == ResidualStatistics(0.5, 3, 4)
    assert residual_statistics(ranks, np.ones(ranks.shape, dtype=bool)) == ResidualStatistics(0.0, 0, 0)


def test_report_residual_statistics() -> None:
    pooled = report_residual_statistics([_report(90, 100, 4), _report(0, 0, 0), _report(60, 100, 12)])
    assert pooled == ResidualStatistics(0.75, 12, 200)
    assert report_residual_statistics([]) == ResidualStatistics(0.0, 0, 0)


def test_lossless_sequence_stats() -> None:
    original = _sequence(10, 20)
    stats = sequence_stats(original, original, 2 * 10 * 20 * 8)

    assert stats.bpp == 8.0
    assert stats.compression_ratio == 1.0
    assert stats.psnr == math.inf
    assert stats.zero_proportion is None


def test_lossy_sequence_stats() -> None:
    stats = sequence_stats(_sequence(10, 20), _sequence(11, 20), 76, ResidualStatistics(0.9, 3, 400))

    assert stats.bpp == pytest.approx(0.19)
    assert stats.compression_ratio == pytest.approx(8 / 0.19)
    # Pooled MSE 0.5 over both frames.
    assert stats.psnr == pytest.approx(20 * math.log10(255 / math.sqrt(0.5)))
    assert stats.zero_proportion == 0.9


def test_sequence_stats_rejections() -> None:
    with pytest.raises(InputError):
        sequence_stats(_sequence(1, 2), _sequence(1), 100)
    with pytest.raises(InputError):
        sequence_stats(_sequence(1), Sequence((pad_frame(np.zeros((10, 21), dtype=np.uint8)),)), 100)
    with pytest.raises(InputError):
        sequence_stats(_sequence(1), _sequence(1), 0)


def test_coding_gain() -> None:
    assert coding_gain(0.9, 1.0) == pytest.approx(-10.0)
    assert coding_gain(1.5, 1.0) == pytest.approx(50.0)
    with pytest.raises(InputError):
        coding_gain(1.0, 0.0)


def test_rd_csv_round_trip(tmp_path) -> None:
    path = str(tmp_path / "curves" / "anchor.csv")
    points = [RdPoint(0.1 + index / 7, 40 + index / 3) for index in range(5)]
    write_rd_csv(path, points)

    assert read_rd_csv(path) == points


@pytest.mark.parametrize(
    "text",
    [
        "rate,quality\n1,40\n",
        "bpp,psnr\n1,40,5\n",
        "bpp,psnr\n1\n",
        "bpp,psnr\none,40\n",
        "bpp,psnr\n0,40\n",
        "",
    ],
)
def test_rd_csv_rejections(tmp_path, text: str) -> None:
    path = tmp_path / "curve.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(InputError):
        read_rd_csv(str(path))
