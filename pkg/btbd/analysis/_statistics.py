import csv
import io
from typing import Iterable, Optional

import numpy as np

from btbd.codec.frames import mse, mse_to_psnr
from btbd.core.exceptions import InputError
from btbd.ddl.analysis import ResidualStatistics, RdPoint, SequenceStats
from btbd.ddl.frames import Sequence
from btbd.ddl.stream import FrameReport
from btbd.utils import files

CSV_FIELDS = ("bpp", "psnr")
BITS_PER_SAMPLE = 8


def residual_statistics(ranks: np.ndarray, dontcare: Optional[np.ndarray] = None) -> ResidualStatistics:
    """Summarises coded residual ranks, ignoring don't-care cells.

    Returns:
        The proportion of zero ranks (0 without coded cells), the largest rank and the number of coded cells.
    """
    coded = ranks if dontcare is None else ranks[~dontcare]
    if coded.size == 0:
        return ResidualStatistics(0.0, 0, 0)
    return ResidualStatistics(float(np.count_nonzero(coded == 0)) / coded.size, int(coded.max()), int(coded.size))


def report_residual_statistics(reports: Iterable[FrameReport]) -> ResidualStatistics:
    """Pools the residual accounting of per-frame coding reports."""
    zeros = coded = dynamic_range = 0
    for report in reports:
        zeros += report.zero_ranks
        coded += report.coded_ranks
        dynamic_range = max(dynamic_range, report.max_rank)
    return ResidualStatistics(zeros / coded if coded else 0.0, dynamic_range, coded)


def sequence_stats(
    original: Sequence, decoded: Sequence, bits: int, residuals: Optional[ResidualStatistics] = None
) -> SequenceStats:
    """Rate and distortion of a coded sequence over the original (unpadded) frame region.

    Args:
        original: The source sequence.
        decoded: The decoded sequence.
        bits: The coded size in bits.
        residuals: Residual statistics of the stream, for the zero proportion.

    Raises:
        InputError: The sequences don't match or `bits` is not positive.
    """
    if len(original) != len(decoded) or len(original) == 0:
        raise InputError(f"cannot compare {len(original)} original frames with {len(decoded)} decoded frames")
    if (original.original_width, original.original_height) != (decoded.original_width, decoded.original_height):
        raise InputError("the original and decoded sequences have different dimensions")
    if bits <= 0:
        raise InputError(f"the coded size must be positive, got {bits} bits")

    pixels = len(original) * original.original_width * original.original_height
    bpp = bits / pixels
    pairs = zip(original.frames, decoded.frames)
    pooled = float(np.mean([mse(source.cropped, test.cropped) for source, test in pairs]))
    return SequenceStats(
        bpp,
        BITS_PER_SAMPLE / bpp,
        mse_to_psnr(pooled),
        None if residuals is None or residuals.coded == 0 else residuals.zero_proportion,
    )


def coding_gain(bpp: float, baseline_bpp: float) -> float:
    """Relative bitrate change against a baseline in percent, negative for a saving.

    Raises:
        InputError: The baseline is not positive.
    """
    if baseline_bpp <= 0:
        raise InputError(f"the baseline bitrate must be positive, got {baseline_bpp}")
    return (bpp - baseline_bpp) / baseline_bpp * 100


def write_rd_csv(path: str, points: Iterable[RdPoint]) -> None:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for point in points:
        writer.writerow({"bpp": repr(point.bitrate), "psnr": repr(point.distortion)})
    files.write_text(path, buffer.getvalue())


def read_rd_csv(path: str) -> list[RdPoint]:
    """Reads a rate-distortion curve with the header `bpp,psnr`, one point per line.

    Raises:
        InputError: The header is missing, a row is malformed or a bitrate is not positive.
    """
    reader = csv.DictReader(io.StringIO(files.read_text(path)))
    if reader.fieldnames is None or tuple(name.strip() for name in reader.fieldnames) != CSV_FIELDS:
        raise InputError(f"{path} must start with the header 'bpp,psnr'")

    points = []
    for line, row in enumerate(reader, start=2):
        values = list(row.values())
        if len(values) != len(CSV_FIELDS) or any(value is None or isinstance(value, list) for value in values):
            raise InputError(f"{path}:{line}: expected two columns")
        try:
            point = RdPoint(float(values[0]), float(values[1]))
        except ValueError as err:
            raise InputError(f"{path}:{line}: {err}") from err
        if point.bitrate <= 0:
            raise InputError(f"{path}:{line}: the bitrate must be positive")
        points.append(point)

    return points
