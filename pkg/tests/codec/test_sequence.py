import dataclasses

import numpy as np
import pytest

from btbd.codec import sequence as codec
from btbd.codec.frames import pad_frame
from btbd.core.exceptions import DecodeError, InputError
from btbd.ddl.coding import FrameType
from btbd.ddl.frames import Sequence
from btbd.ddl.stream import HEADER_SIZE, MAGIC, CodedStream, DecodedStream, StreamHeader


def _scene(count: int, height: int = 64, width: int = 64, seed: int = 0) -> Sequence:
    """A slanted background with a bright square moving right and down."""
    rng = np.random.default_rng(seed)
    rows, cols = np.mgrid[0:height, 0:width]
    frames = []
    for index in range(count):
        samples = 60 + rows // 2 + cols // 3 + rng.integers(0, 3, (height, width))
        top, left = 10 + 2 * index, 12 + 3 * index
        samples[top : top + 20, left : left + 16] = 200 - index
        frames.append(pad_frame(np.clip(samples, 0, 255)))
    return Sequence(tuple(frames))


def _assert_decoder_matches_encoder(coded: CodedStream) -> DecodedStream:
    decoded = codec.decode_sequence(coded.data)
    assert decoded.header == coded.header
    assert len(decoded.sequence) == len(coded.reconstructions)
    for reconstruction, frame in zip(coded.reconstructions, decoded.sequence.frames):
        assert np.array_equal(reconstruction.samples, frame.samples)
    assert [report.bits for report in decoded.reports] == [report.bits for report in coded.reports]
    return decoded


def test_lossless_round_trip() -> None:
    source = _scene(3, height=72, width=80)
    coded = codec.encode_sequence(source, q=1, search_width=8, gop_period=2)

    assert coded.data[:4] == MAGIC
    assert [report.frame_type for report in coded.reports] == [FrameType.I, FrameType.P, FrameType.I]
    assert coded.bits == len(coded.data) * 8

    decoded = _assert_decoder_matches_encoder(coded)
    for original, frame in zip(source.frames, decoded.sequence.frames):
        assert (frame.original_width, frame.original_height) == (80, 72)
        assert np.array_equal(frame.cropped, original.cropped)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13, 15])
def test_near_lossless_error_bound(q: int) -> None:
    source = _scene(2, seed=q)
    coded = codec.encode_sequence(source, q=q, search_width=4)
    decoded = _assert_decoder_matches_encoder(coded)

    for original, frame in zip(source.frames, decoded.sequence.frames):
        error = np.abs(original.cropped.astype(int) - frame.cropped.astype(int))
        assert error.max() <= (q - 1) // 2


def test_reconstructions_match_across_gops() -> None:
    source = _scene(5, seed=4)
    coded = codec.encode_sequence(source, q=15, search_width=8, gop_period=2)

    assert [report.frame_type for report in coded.reports] == [
        FrameType.I,
        FrameType.P,
        FrameType.I,
        FrameType.P,
        FrameType.I,
    ]
    _assert_decoder_matches_encoder(coded)


def test_threads_produce_identical_streams() -> None:
    source = _scene(4, seed=5)
    single = codec.encode_sequence(source, q=3, search_width=4, gop_period=2)
    pooled = codec.encode_sequence(source, q=3, search_width=4, gop_period=2, threads=2)
    assert single.data == pooled.data


def test_static_sequence_is_cheap() -> None:
    frame = _scene(1).frames[0]
    coded = codec.encode_sequence(Sequence((frame,) * 3), search_width=4)

    intra, *inter = coded.reports
    assert all(report.bits < intra.bits / 20 for report in inter)
    assert all(report.coded_ranks == 0 for report in inter)
    _assert_decoder_matches_encoder(coded)


@pytest.mark.parametrize("pattern", ["constant", "checkerboard", "noise", "extremes"])
def test_pathological_frames(pattern: str) -> None:
    rng = np.random.default_rng(6)
    rows, cols = np.mgrid[0:64, 0:64]
    grids = {
        "constant": np.full((64, 64), 37),
        "checkerboard": ((rows + cols) % 2) * 255,
        "noise": rng.integers(0, 256, (64, 64)),
        "extremes": np.where(rng.random((64, 64)) < 0.5, 0, 255),
    }
    first = pad_frame(grids[pattern])
    second = pad_frame(np.roll(grids[pattern], 1, axis=1))
    source = Sequence((first, second))

    for q in (1, 7):
        decoded = _assert_decoder_matches_encoder(codec.encode_sequence(source, q=q, search_width=2))
        for original, frame in zip(source.frames, decoded.sequence.frames):
            assert np.abs(original.samples.astype(int) - frame.samples.astype(int)).max() <= (q - 1) // 2


def test_make_header_validation() -> None:
    source = _scene(1)
    header = codec.make_header(source, 5, 16, 4)
    assert (header.width, header.height, header.frame_count, header.q) == (64, 64, 1, 5)
    assert StreamHeader.unpack(header.pack()) == header

    with pytest.raises(InputError, match="odd"):
        codec.make_header(source, 4, 16, 4)
    with pytest.raises(InputError):
        codec.make_header(source, 1, 0, 4)
    with pytest.raises(InputError):
        codec.make_header(source, 1, 16, 0)
    with pytest.raises(InputError):
        codec.make_header(Sequence(()), 1, 16, 4)


def test_validate_header() -> None:
    header = codec.make_header(_scene(1), 3, 8, 8)
    codec.validate_header(header, 1000)

    broken = [
        dataclasses.replace(header, magic=b"XXXX"),
        dataclasses.replace(header, version=9),
        dataclasses.replace(header, width=70),
        dataclasses.replace(header, original_width=0),
        dataclasses.replace(header, original_height=65),
        dataclasses.replace(header, q=4),
        dataclasses.replace(header, gop_period=0),
        dataclasses.replace(header, frame_count=0),
        dataclasses.replace(header, frame_count=2000),
    ]
    for candidate in broken:
        with pytest.raises(DecodeError):
            codec.validate_header(candidate, 1000)


def test_truncated_streams_are_rejected() -> None:
    data = codec.encode_sequence(_scene(2, seed=7), q=1, search_width=4).data
    for length in [0, 5, HEADER_SIZE - 1, HEADER_SIZE, HEADER_SIZE + 1, len(data) // 2, len(data) - 1]:
        with pytest.raises(DecodeError):
            codec.decode_sequence(data[:length])


def test_trailing_data_is_rejected() -> None:
    data = codec.encode_sequence(_scene(1), q=1, search_width=4).data
    with pytest.raises(DecodeError, match="trailing"):
        codec.decode_sequence(data + b"\x00")


def test_corrupt_streams_only_raise_decode_errors() -> None:
    data = codec.encode_sequence(_scene(2, seed=8), q=5, search_width=4).data
    rng = np.random.default_rng(8)
    for _ in range(40):
        corrupted = bytearray(data)
        for position in rng.integers(HEADER_SIZE, len(data), 3):
            corrupted[int(position)] ^= int(rng.integers(1, 256))
        try:
            codec.decode_sequence(bytes(corrupted))
        except DecodeError:
            pass
