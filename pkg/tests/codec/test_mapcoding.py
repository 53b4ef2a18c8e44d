from typing import Optional

import numpy as np
import pytest

from btbd.codec import mapcoding
from btbd.codec.maps import cover_index, leaf_rects
from btbd.core.exceptions import DecodeError
from btbd.ddl.maps import DataMap, MapKind
from btbd.ddl.stream import MapCodingMode
from btbd.entropy import BitReader, BitWriter


def _flags(symbols: np.ndarray) -> DataMap:
    return DataMap(MapKind.DIV16, symbols[None].astype(np.uint8), np.zeros((1, *symbols.shape), dtype=bool), 1)


def _maps() -> list[DataMap]:
    rng = np.random.default_rng(21)

    division = rng.integers(0, 2, (1, 16, 16))
    rectangles = np.zeros((1, 32, 48), dtype=np.uint8)
    rectangles[0, 4:20, 10:30] = 1

    rects = leaf_rects(*(_flags(rng.integers(0, 2, (2**level, 2**level))) for level in (1, 2, 3)))
    mode_symbols = np.zeros((1, 16, 16), dtype=np.uint8)
    mode_dontcare = np.ones((1, 16, 16), dtype=bool)
    for rect in rects:
        mode_symbols[0][rect.grid_cell] = rng.integers(0, 4)
        mode_dontcare[0][rect.grid_cell] = False

    ranks = np.minimum(rng.geometric(0.3, (1, 64, 64)) - 1, 85)
    skipped = np.zeros(ranks.shape, dtype=bool)
    skipped[0, 16:32, 32:64] = True
    ranks[skipped] = 0

    return [
        DataMap(MapKind.DIV32, division, rng.random(division.shape) < 0.25, 1),
        DataMap(MapKind.DIV64, rectangles, np.zeros(rectangles.shape, dtype=bool), 1),
        DataMap(MapKind.MVZ, rng.integers(0, 2, (2, 16, 16)), rng.random((2, 16, 16)) < 0.6, 1),
        DataMap(MapKind.MODE, mode_symbols, mode_dontcare, 3, cover=cover_index(rects, (16, 16))),
        DataMap(MapKind.RESIDUAL, ranks, skipped, int(ranks.max()), step=3),
    ]


def _decode(data: bytes, datamap: DataMap) -> DataMap:
    decoded, _ = mapcoding.decode_map(BitReader(data), datamap.kind, datamap.dontcare, datamap.step, datamap.cover)
    return decoded


def _assert_same(decoded: DataMap, datamap: DataMap) -> None:
    codable = ~datamap.dontcare
    assert np.array_equal(decoded.symbols[codable], datamap.symbols[codable])
    assert decoded.alphabet_bound == datamap.alphabet_bound


def test_eligible_modes() -> None:
    assert mapcoding.eligible_modes(MapKind.RESIDUAL)[-1] is MapCodingMode.RUN
    assert MapCodingMode.RUN not in mapcoding.eligible_modes(MapKind.MODE)
    assert mapcoding.mode_signal_bits(MapKind.RESIDUAL) == 3
    assert mapcoding.mode_signal_bits(MapKind.DIV64) == 2


def test_encode_map_round_trip() -> None:
    for datamap in _maps():
        sink = BitWriter()
        report = mapcoding.encode_map(datamap, sink)

        assert report.bits == len(sink)
        assert set(report.candidates) == set(mapcoding.eligible_modes(datamap.kind))
        assert report.mode is min(report.candidates, key=lambda mode: (report.candidates[mode], int(mode)))

        decoded, decoded_report = mapcoding.decode_map(
            BitReader(sink.getvalue()), datamap.kind, datamap.dontcare, datamap.step, datamap.cover
        )
        _assert_same(decoded, datamap)
        assert decoded_report.mode is report.mode
        assert decoded_report.bits == report.bits


def test_every_mode_round_trips() -> None:
    for datamap in _maps():
        for mode in mapcoding.eligible_modes(datamap.kind):
            sink = BitWriter()
            sink.write_uint(int(mode), mapcoding.mode_signal_bits(datamap.kind))
            if datamap.kind is MapKind.RESIDUAL:
                sink.write_uint(datamap.alphabet_bound, mapcoding.RESIDUAL_BOUND_BITS)
            sink.extend(mapcoding.encode_payload(datamap, mode))

            _assert_same(_decode(sink.getvalue(), datamap), datamap)


def test_rectangles_prefer_partitioning() -> None:
    rectangles = _maps()[1]
    report = mapcoding.encode_map(rectangles, BitWriter())
    assert report.mode.partitioned


def test_empty_map_is_only_signalled() -> None:
    dontcare = np.ones((1, 4, 4), dtype=bool)
    datamap = DataMap(MapKind.DIV32, np.zeros((1, 4, 4), dtype=np.uint8), dontcare, 1)
    sink = BitWriter()
    report = mapcoding.encode_map(datamap, sink)

    assert (report.mode, report.bits) == (MapCodingMode.PC, 2)
    decoded, _ = mapcoding.decode_map(BitReader(sink.getvalue()), MapKind.DIV32, dontcare)
    assert not decoded.symbols.any()


def _residual_prefix(mode: int, bound: Optional[int] = None) -> bytes:
    sink = BitWriter()
    sink.write_uint(mode, 3)
    if bound is not None:
        sink.write_uint(bound, mapcoding.RESIDUAL_BOUND_BITS)
    sink.write_uint(0, 32)
    return sink.getvalue()


def test_decode_rejects_invalid_signals() -> None:
    dontcare = np.zeros((1, 8, 8), dtype=bool)
    with pytest.raises(DecodeError):
        mapcoding.decode_map(BitReader(_residual_prefix(7)), MapKind.RESIDUAL, dontcare, 3)
    with pytest.raises(DecodeError):
        mapcoding.decode_map(BitReader(_residual_prefix(0, 0)), MapKind.RESIDUAL, dontcare, 3)
    with pytest.raises(DecodeError):
        mapcoding.decode_map(BitReader(_residual_prefix(0, 86)), MapKind.RESIDUAL, dontcare, 3)

    empty = np.ones((1, 2, 2), dtype=bool)
    with pytest.raises(DecodeError):
        mapcoding.decode_map(BitReader(b"\x40"), MapKind.DIV16, empty)
