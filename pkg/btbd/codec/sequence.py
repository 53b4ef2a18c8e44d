"""
Stream orchestration: the header, the I/P frame loop and the per-frame payload of maps and motion vectors.

Every frame starts with its type bit and ends byte-aligned. Frames are coded in the order div64, div32,
div16, mode, mvz (P-frames only) and residual map, followed by the motion vectors of InterM CUs, so the
decoder can derive every don't-care mask from maps it has already read.
"""
import struct
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

import numpy as np

from btbd.codec import quantizer
from btbd.codec.frames import padded_size
from btbd.codec.mapcoding import decode_map, encode_map
from btbd.codec.maps import (
    GRID,
    cover_index,
    div_dontcare,
    form_maps,
    leaf_rects,
    mode_dontcare,
    mvz_dontcare,
    residual_dontcare,
    significance_map,
)
from btbd.codec.mvcoding import decode_mvs, encode_mvs, mv_order
from btbd.codec.prediction import block_fits, intra_reconstruct_cu, motion_compensate
from btbd.codec.rdo import FrameState, build_ctu_tree
from btbd.core import messages
from btbd.core.exceptions import DecodeError, InputError
from btbd.ddl.coding import ZERO_MV, CuDecision, FrameType, MotionVector, PredictionMode
from btbd.ddl.frames import CTU_SIZE, CuRect, DepthFrame, Sequence
from btbd.ddl.maps import DataMap, MapKind
from btbd.ddl.stream import (
    HEADER_SIZE,
    MAGIC,
    STREAM_VERSION,
    CodedStream,
    DecodedStream,
    FrameReport,
    StreamHeader,
)
from btbd.entropy import BitReader, BitWriter
from btbd.utils import context

MAX_DIMENSION = 16384
MAX_FRAME_AREA = 1 << 26
MAX_SEARCH_WIDTH = 255
MAX_GOP_PERIOD = 255

DEFAULT_SEARCH_WIDTH = 32
DEFAULT_GOP_PERIOD = 8

# Low-level failures a corrupt stream can provoke; all of them surface as DecodeError.
_DECODE_FAILURES: list[type[BaseException]] = [
    IndexError,
    KeyError,
    ValueError,
    OverflowError,
    RecursionError,
    struct.error,
]


def make_header(sequence: Sequence, q: int, search_width: int, gop_period: int) -> StreamHeader:
    """Validates the coding parameters and builds the stream header of a sequence.

    Raises:
        InputError: The sequence is empty or too large, or a parameter is out of range.
    """
    quantizer.validate_step(q)
    if not 1 <= search_width <= MAX_SEARCH_WIDTH:
        raise InputError(f"search width must lie in [1, {MAX_SEARCH_WIDTH}], got {search_width}")
    if not 1 <= gop_period <= MAX_GOP_PERIOD:
        raise InputError(f"GOP period must lie in [1, {MAX_GOP_PERIOD}], got {gop_period}")
    if len(sequence) == 0:
        raise InputError("cannot encode an empty sequence")
    if any(frame.samples.shape != sequence.frames[0].samples.shape for frame in sequence.frames):
        raise InputError("all frames of a sequence must share their dimensions")
    if max(sequence.width, sequence.height) > MAX_DIMENSION or sequence.width * sequence.height > MAX_FRAME_AREA:
        raise InputError(f"frames of {sequence.width}x{sequence.height} are too large")

    return StreamHeader(
        MAGIC,
        STREAM_VERSION,
        sequence.width,
        sequence.height,
        sequence.original_width,
        sequence.original_height,
        len(sequence),
        q,
        search_width,
        gop_period,
    )


def validate_header(header: StreamHeader, stream_size: int) -> None:
    """Rejects headers no encoder writes, before any frame is decoded.

    Args:
        header: The parsed header.
        stream_size: The length of the whole stream in bytes.

    Raises:
        DecodeError: A header field is invalid.
    """
    problems = []
    if header.magic != MAGIC:
        problems.append("not a BTBD stream")
    elif header.version != STREAM_VERSION:
        problems.append(f"unsupported stream version {header.version}")
    elif not (
        0 < header.width <= MAX_DIMENSION
        and 0 < header.height <= MAX_DIMENSION
        and header.width % CTU_SIZE == 0
        and header.height % CTU_SIZE == 0
        and header.width * header.height <= MAX_FRAME_AREA
    ):
        problems.append(f"invalid padded dimensions {header.width}x{header.height}")
    elif not (
        0 < header.original_width
        and 0 < header.original_height
        and padded_size(header.original_width) == header.width
        and padded_size(header.original_height) == header.height
    ):
        problems.append(f"original dimensions {header.original_width}x{header.original_height} don't match")
    elif header.q not in quantizer.SUPPORTED_STEPS:
        problems.append(f"unsupported quantisation step {header.q}")
    elif not (0 < header.search_width and 0 < header.gop_period):
        problems.append("search width and GOP period must be positive")
    elif not 0 < header.frame_count <= stream_size - HEADER_SIZE:
        problems.append(f"frame count {header.frame_count} is impossible for the stream size")

    if problems:
        raise DecodeError(problems[0], 0)


def _residual_statistics(residual: DataMap) -> tuple[int, int, int]:
    coded = residual.symbols[~residual.dontcare]
    if coded.size == 0:
        return 0, 0, 0
    return int(np.count_nonzero(coded == 0)), int(coded.size), int(coded.max())


def encode_frame(
    frame: DepthFrame, reference: Optional[DepthFrame], index: int, header: StreamHeader
) -> tuple[bytes, DepthFrame, FrameReport]:
    """Codes one frame.

    Args:
        frame: The padded source frame.
        reference: The reconstruction of the previous frame for P-frames, None for I-frames.
        index: The frame number.
        header: The stream header.

    Returns:
        The byte-aligned frame payload, the encoder-side reconstruction and the coding report.
    """
    frame_type = header.frame_type(index)
    state = FrameState(
        frame.samples,
        None if frame_type is FrameType.I or reference is None else reference.samples.astype(np.int64),
        header.q,
        header.search_width,
    )
    trees = [
        build_ctu_tree(CuRect(row, col, CTU_SIZE), state)
        for row in range(0, header.height, CTU_SIZE)
        for col in range(0, header.width, CTU_SIZE)
    ]
    maps = form_maps(trees, (header.height, header.width), header.q)

    sink = BitWriter()
    sink.write_bit(int(state.frame_type))
    coded_maps = maps.in_stream_order(with_mvz=state.frame_type is FrameType.P)
    map_reports = tuple(encode_map(datamap, sink) for datamap in coded_maps)

    leaves = [leaf for tree in trees for leaf in tree.leaves() if leaf.mode == PredictionMode.INTER_M]
    moving: list[CuDecision] = [leaves[position] for position in mv_order([leaf.rect for leaf in leaves])]
    mv_report = None
    if moving:
        mv_report = encode_mvs(
            [leaf.rect for leaf in moving],
            [leaf.mv for leaf in moving],
            (header.height // GRID, header.width // GRID),
            header.search_width,
            sink,
        )
    sink.align()

    zero_ranks, coded_ranks, max_rank = _residual_statistics(maps.residual)
    report = FrameReport(
        index, state.frame_type, len(sink), map_reports, mv_report, zero_ranks, coded_ranks, max_rank
    )
    messages.debug(f"frame {index} ({state.frame_type.name}): {report.bits} bits")
    reconstruction = DepthFrame(state.reconstruction.astype(np.uint8), frame.original_width, frame.original_height)
    return sink.getvalue(), reconstruction, report


def _encode_gop(
    header: StreamHeader, frames: tuple[DepthFrame, ...], first_index: int
) -> list[tuple[bytes, DepthFrame, FrameReport]]:
    messages.debug(f"GOP starting at frame {first_index}, {len(frames)} frames")
    results = []
    reference: Optional[DepthFrame] = None
    for offset, frame in enumerate(frames):
        payload, reference, report = encode_frame(frame, reference, first_index + offset, header)
        results.append((payload, reference, report))
    return results


def encode_sequence(
    sequence: Sequence,
    q: int = 1,
    search_width: int = DEFAULT_SEARCH_WIDTH,
    gop_period: int = DEFAULT_GOP_PERIOD,
    threads: int = 1,
) -> CodedStream:
    """Encodes a depth sequence.

    Frame t is an I-frame when t is a multiple of `gop_period` and a P-frame predicted from the reconstruction
    of frame t - 1 otherwise. GOPs don't depend on each other, so with `threads` above one they are encoded in
    a process pool; the stream is identical either way.

    Args:
        sequence: The padded frames to encode.
        q: The odd quantisation step in 1..15; every sample is reconstructed within (q - 1) / 2.
        search_width: The motion search range ω.
        gop_period: The distance between I-frames.
        threads: The number of worker processes.

    Raises:
        InputError: A parameter is invalid.

    Returns:
        The stream, its per-frame reports and the encoder-side reconstructions.
    """
    header = make_header(sequence, q, search_width, gop_period)
    jobs = [
        (header, sequence.frames[start : start + gop_period], start) for start in range(0, len(sequence), gop_period)
    ]

    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_encode_gop, *zip(*jobs)))
    else:
        results = [_encode_gop(*job) for job in jobs]

    frames = [frame for gop in results for frame in gop]
    data = header.pack() + b"".join(payload for payload, _, _ in frames)
    return CodedStream(
        header,
        data,
        tuple(report for _, _, report in frames),
        tuple(reconstruction for _, reconstruction, _ in frames),
    )


def _reconstruct(
    rects: list[CuRect],
    modes: list[PredictionMode],
    mvs: dict[CuRect, MotionVector],
    ranks: np.ndarray,
    reference: Optional[np.ndarray],
    shape: tuple[int, int],
    q: int,
) -> np.ndarray:
    reconstruction = np.zeros(shape, dtype=np.int64)
    available = np.zeros(shape, dtype=bool)
    r_max = quantizer.quantized_range(q)
    for rect, mode in zip(rects, modes):
        if mode == PredictionMode.INTRA:
            intra_reconstruct_cu(reconstruction, available, rect, ranks[rect.slices], q)
            continue

        assert reference is not None
        mv = mvs.get(rect, ZERO_MV)
        if not block_fits(shape, rect, mv):
            raise DecodeError(f"motion vector {mv} of the CU at {rect.grid_cell} points outside the frame")

        predicted = motion_compensate(reference, rect, mv).astype(np.int64)
        if mode == PredictionMode.SKIP:
            reconstruction[rect.slices] = predicted
        else:
            level = quantizer.prediction_level(predicted, q)
            quantized = quantizer.rank_unmap_array(ranks[rect.slices], np.asarray(level), r_max)
            reconstruction[rect.slices] = quantizer.reconstruct_array(predicted, quantized, q)
        available[rect.slices] = True

    return reconstruction


def decode_frame(
    source: BitReader, header: StreamHeader, index: int, reference: Optional[DepthFrame]
) -> tuple[DepthFrame, FrameReport]:
    """Decodes one frame and leaves `source` at the start of the next one.

    Args:
        source: The stream, positioned at the frame type bit.
        header: The validated stream header.
        index: The frame number.
        reference: The previously decoded frame, required for P-frames.

    Raises:
        DecodeError: The frame payload is invalid.
    """
    start = source.position
    frame_type = FrameType(source.read_bit())
    if frame_type is not header.frame_type(index):
        raise DecodeError(f"frame {index} should be a {header.frame_type(index).name}-frame", start)
    if frame_type is FrameType.P and reference is None:
        raise DecodeError(f"P-frame {index} has no reference", start)

    shape = (header.height, header.width)
    grid_shape = (header.height // GRID, header.width // GRID)
    div64, div64_report = decode_map(
        source, MapKind.DIV64, np.zeros((1, header.height // CTU_SIZE, header.width // CTU_SIZE), dtype=bool)
    )
    div32, div32_report = decode_map(source, MapKind.DIV32, div_dontcare(div64))
    div16, div16_report = decode_map(source, MapKind.DIV16, div_dontcare(div32))
    rects = leaf_rects(div64, div32, div16)
    significance = significance_map(rects, grid_shape)

    mode_start = source.position
    mode, mode_report = decode_map(
        source, MapKind.MODE, mode_dontcare(significance), cover=cover_index(rects, grid_shape)
    )
    modes = [PredictionMode(int(mode.symbols[0][rect.grid_cell])) for rect in rects]
    if frame_type is FrameType.I and any(cu_mode != PredictionMode.INTRA for cu_mode in modes):
        raise DecodeError(f"I-frame {index} contains inter-coded CUs", mode_start)
    reports = [div64_report, div32_report, div16_report, mode_report]

    candidates = [rect for rect, cu_mode in zip(rects, modes) if cu_mode == PredictionMode.INTER_M]
    moving = [candidates[position] for position in mv_order(candidates)]
    nonzero: list[tuple[bool, bool]] = []
    if frame_type is FrameType.P:
        mvz_start = source.position
        mvz, mvz_report = decode_map(source, MapKind.MVZ, mvz_dontcare(mode, significance))
        reports.append(mvz_report)
        nonzero = [(bool(mvz.symbols[0][rect.grid_cell]), bool(mvz.symbols[1][rect.grid_cell])) for rect in moving]
        if not all(any(flags) for flags in nonzero):
            raise DecodeError(f"frame {index} has an InterM CU without motion", mvz_start)

    residual, residual_report = decode_map(source, MapKind.RESIDUAL, residual_dontcare(rects, mode, shape), header.q)
    reports.append(residual_report)

    mv_report = None
    mvs: dict[CuRect, MotionVector] = {}
    if moving:
        vectors, mv_report = decode_mvs(source, moving, nonzero, grid_shape, header.search_width)
        mvs = dict(zip(moving, vectors))

    samples = _reconstruct(
        rects,
        modes,
        mvs,
        residual.symbols[0],
        None if reference is None else reference.samples,
        shape,
        header.q,
    )
    source.align()

    zero_ranks, coded_ranks, max_rank = _residual_statistics(residual)
    report = FrameReport(
        index, frame_type, source.position - start, tuple(reports), mv_report, zero_ranks, coded_ranks, max_rank
    )
    messages.debug(f"decoded frame {index} ({frame_type.name}): {report.bits} bits")
    return DepthFrame(samples.astype(np.uint8), header.original_width, header.original_height), report


def _decode(data: bytes) -> DecodedStream:
    if len(data) < HEADER_SIZE:
        raise DecodeError("stream is shorter than its header", 0)

    header = StreamHeader.unpack(data)
    validate_header(header, len(data))

    source = BitReader(data, HEADER_SIZE * 8)
    frames: list[DepthFrame] = []
    reports: list[FrameReport] = []
    reference: Optional[DepthFrame] = None
    for index in range(header.frame_count):
        reference, report = decode_frame(source, header, index, reference)
        frames.append(reference)
        reports.append(report)

    if source.remaining > 0:
        raise DecodeError("trailing data after the last frame", source.position)

    return DecodedStream(header, Sequence(tuple(frames)), tuple(reports))


def decode_sequence(data: bytes) -> DecodedStream:
    """Decodes a complete stream.

    Args:
        data: The stream bytes, header included.

    Raises:
        DecodeError: The stream is malformed, truncated or followed by trailing data. No other exception escapes.

    Returns:
        The header, the decoded (padded) frames and per-frame reports.
    """
    with context.Translates(_DECODE_FAILURES, lambda err: DecodeError(f"malformed stream: {err!r}")):
        return _decode(data)
