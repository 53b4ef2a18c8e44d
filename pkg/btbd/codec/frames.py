import math
import re
from typing import Iterable

import numpy as np

from btbd.core.exceptions import InputError
from btbd.ddl.frames import CTU_SIZE, MAX_SAMPLE, DepthFrame, Sequence
from btbd.utils import files

_PGM_HEADER = re.compile(rb"P5(?:\s|#[^\n]*\n)+(\d+)(?:\s|#[^\n]*\n)+(\d+)(?:\s|#[^\n]*\n)+(\d+)\s")


def padded_size(size: int) -> int:
    """Rounds a dimension up to a whole number of coding tree units."""
    return -(-size // CTU_SIZE) * CTU_SIZE


def pad_frame(samples: np.ndarray) -> DepthFrame:
    """Wraps a grid of samples into a frame, replicating the last row and column up to multiples of 64.

    Args:
        samples: An (height, width) grid of values in [0, 255].

    Returns:
        The padded frame, remembering the original dimensions.
    """
    height, width = samples.shape
    padded = np.pad(
        samples.astype(np.uint8),
        ((0, padded_size(height) - height), (0, padded_size(width) - width)),
        mode="edge",
    )
    return DepthFrame(padded, width, height)


def load_raw(data: bytes, width: int, height: int, frame_count: int) -> Sequence:
    """Loads a headerless 8-bit grayscale sequence.

    Args:
        data: One byte per sample, frames in order, each frame row-major.
        width: Frame width in pixels.
        height: Frame height in pixels.
        frame_count: Number of frames.

    Raises:
        InputError: The buffer length doesn't match the dimensions.
    """
    if width <= 0 or height <= 0 or frame_count <= 0:
        raise InputError("raw dimensions and frame count must be positive")

    if len(data) != width * height * frame_count:
        raise InputError(
            f"raw input holds {len(data)} bytes, expected {width}x{height}x{frame_count} = "
            f"{width * height * frame_count}"
        )

    grids = np.frombuffer(data, dtype=np.uint8).reshape(frame_count, height, width)
    return Sequence(tuple(pad_frame(grid) for grid in grids))


def store_raw(sequence: Sequence | Iterable[DepthFrame]) -> bytes:
    """Serializes the original (unpadded) region of every frame as headerless 8-bit grayscale."""
    frames = sequence.frames if isinstance(sequence, Sequence) else tuple(sequence)
    return b"".join(np.ascontiguousarray(frame.cropped, dtype=np.uint8).tobytes() for frame in frames)


def load_pgm(data: bytes) -> Sequence:
    """Loads one or more concatenated binary PGM (P5) images with maxval 255.

    Raises:
        InputError: The data is not a sequence of equally sized 8-bit P5 images.
    """
    frames = []
    offset = 0
    while offset < len(data):
        if data[offset:].strip() == b"":
            break

        match = _PGM_HEADER.match(data, offset)
        if match is None:
            raise InputError(f"no PGM (P5) header at byte {offset}")

        width, height, maxval = (int(group) for group in match.groups())
        if maxval != MAX_SAMPLE:
            raise InputError(f"only 8-bit PGM files (maxval 255) are supported, got maxval {maxval}")

        start = match.end()
        stop = start + width * height
        if width <= 0 or height <= 0 or stop > len(data):
            raise InputError(f"PGM image at byte {offset} is truncated")

        frames.append(pad_frame(np.frombuffer(data[start:stop], dtype=np.uint8).reshape(height, width)))
        offset = stop

    if not frames:
        raise InputError("the PGM file contains no images")

    if len({(frame.original_width, frame.original_height) for frame in frames}) > 1:
        raise InputError("all PGM images of a sequence must share their dimensions")

    return Sequence(tuple(frames))


def store_pgm(sequence: Sequence | Iterable[DepthFrame]) -> bytes:
    """Serializes the original region of every frame as concatenated binary PGM images."""
    frames = sequence.frames if isinstance(sequence, Sequence) else tuple(sequence)
    return b"".join(
        f"P5\n{frame.original_width} {frame.original_height}\n255\n".encode("ascii")
        + np.ascontiguousarray(frame.cropped, dtype=np.uint8).tobytes()
        for frame in frames
    )


def resolve_format(path: str, file_format: str | None) -> str:
    """Picks 'raw' or 'pgm' from an explicit format or the file extension."""
    if file_format is not None:
        return file_format
    return "pgm" if path.lower().endswith(".pgm") else "raw"


def load_sequence_file(
    path: str,
    width: int | None = None,
    height: int | None = None,
    frame_count: int | None = None,
    file_format: str | None = None,
) -> Sequence:
    """Loads a raw or PGM sequence from disk.

    Raw files need `width` and `height`; the frame count defaults to what the file length implies.

    Raises:
        InputError: Dimensions are missing for a raw file or the contents are malformed.
    """
    data = files.read_bytes(path)
    if resolve_format(path, file_format) == "pgm":
        return load_pgm(data)

    if width is None or height is None:
        raise InputError(f"{path} is a raw file, its width and height are required")

    if frame_count is None:
        frame_count = len(data) // (width * height) if width * height else 0

    return load_raw(data, width, height, frame_count)


def store_sequence_file(path: str, sequence: Sequence, file_format: str | None = None) -> None:
    data = store_pgm(sequence) if resolve_format(path, file_format) == "pgm" else store_raw(sequence)
    files.write_bytes(path, data)


def mse(reference: np.ndarray, test: np.ndarray) -> float:
    """Mean squared error of two equally shaped sample grids."""
    difference = reference.astype(np.int64) - test.astype(np.int64)
    return float(np.mean(difference * difference))


def mse_to_psnr(value: float) -> float:
    """Converts a mean squared error to PSNR in dB for 8-bit samples; infinite when the error is zero."""
    if value <= 0:
        return math.inf
    return 20 * math.log10(MAX_SAMPLE / math.sqrt(value))


def psnr(reference: DepthFrame, test: DepthFrame) -> float:
    """Computes the PSNR of `test` against `reference` over the original (unpadded) region.

    Raises:
        InputError: The frames have different dimensions.

    Returns:
        The PSNR in dB, `math.inf` for identical frames.
    """
    if (reference.original_width, reference.original_height) != (test.original_width, test.original_height):
        raise InputError("PSNR needs frames of identical dimensions")

    return mse_to_psnr(mse(reference.cropped, test.cropped))
