"""
Coding of the non-zero motion vector components of a frame.

Whether a component is zero is already known from the mvz map, so only non-zero components are coded, in
row-major order of the top-left 8×8 cell of their CU, x before y.
"""
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from btbd.core import messages
from btbd.core.exceptions import CodecInvariantError, DecodeError
from btbd.ddl.coding import MotionVector
from btbd.ddl.frames import CuRect
from btbd.ddl.stream import MvCodingMode, MvCodingReport
from btbd.entropy import (
    AdaptiveModel,
    ArithmeticDecoder,
    ArithmeticEncoder,
    BitReader,
    BitWriter,
    eg_modified_decode,
    eg_modified_encode,
    majority_sign,
)

MODE_SIGNAL_BITS = 2


@dataclass(frozen=True)
class MvSlot:
    """One coded MV component.

    Attributes:
        cu: Index of the CU in MV order.
        component: 0 for x, 1 for y.
    """

    cu: int
    component: int


def mv_order(rects: Sequence[CuRect]) -> list[int]:
    """Sorts CUs into MV order: row-major by their top-left 8×8 cell."""
    return sorted(range(len(rects)), key=lambda index: rects[index].grid_cell)


def predicted_range_bits(search_width: int) -> int:
    """Width of the signalled range of prediction differences, ceil(log2(2ω))."""
    return (2 * search_width - 1).bit_length()


def plain_range_bits(search_width: int) -> int:
    """Width of the signalled range of component values, ceil(log2(ω))."""
    return (search_width - 1).bit_length()


class MedianPredictor:
    """Predicts MV components from the left, above and above-right InterM CUs in the 8×8 grid.

    Args:
        rects: The InterM CUs in MV order.
        grid_shape: The (rows, cols) of the 8×8 grid.
    """

    def __init__(self, rects: Sequence[CuRect], grid_shape: tuple[int, int]) -> None:
        self.rects = rects
        self.owner = np.full(grid_shape, -1, dtype=np.int64)
        for index, rect in enumerate(rects):
            row, col = rect.grid_cell
            self.owner[row : row + rect.grid_size, col : col + rect.grid_size] = index

    def neighbours(self, index: int) -> list[int]:
        rect = self.rects[index]
        row, col = rect.grid_cell
        rows, cols = self.owner.shape
        found = []
        for n_row, n_col in ((row, col - 1), (row - 1, col), (row - 1, col + rect.grid_size)):
            if 0 <= n_row < rows and 0 <= n_col < cols and self.owner[n_row, n_col] >= 0:
                found.append(int(self.owner[n_row, n_col]))
        return found

    def predict(self, index: int, component: int, known: Sequence[Sequence[int]]) -> int:
        """Returns the median of the neighbours' components, the lower middle of two and 0 without any.

        Args:
            index: The CU whose component is predicted.
            component: 0 for x, 1 for y.
            known: The (x, y) components of every CU, final for all CUs before `index`.
        """
        values = sorted(known[neighbour][component] for neighbour in self.neighbours(index))
        if not values:
            return 0
        return values[(len(values) - 1) // 2]


def _slots(mvs: Sequence[MotionVector]) -> list[MvSlot]:
    return [MvSlot(cu, component) for cu, mv in enumerate(mvs) for component in (0, 1) if mv.components[component]]


def _differences(mvs: Sequence[MotionVector], predictor: MedianPredictor) -> list[int]:
    known = [mv.components for mv in mvs]
    return [
        known[slot.cu][slot.component] - predictor.predict(slot.cu, slot.component, known) for slot in _slots(mvs)
    ]


def _write_arithmetic(sink: BitWriter, symbols: list[int], alphabet: int) -> None:
    encoder = ArithmeticEncoder(sink)
    model = AdaptiveModel(1, alphabet)
    for symbol in symbols:
        encoder.encode_symbol(model, 0, symbol)
    encoder.finish()


def _payload(mode: MvCodingMode, mvs: Sequence[MotionVector], predictor: MedianPredictor, width: int) -> BitWriter:
    payload = BitWriter()
    values = [mvs[slot.cu].components[slot.component] for slot in _slots(mvs)]
    if mode is MvCodingMode.PG:
        for difference in _differences(mvs, predictor):
            payload.write_se(difference)
    elif mode is MvCodingMode.PA:
        differences = _differences(mvs, predictor)
        bound = max(1, max(abs(difference) for difference in differences))
        payload.write_uint(bound - 1, predicted_range_bits(width))
        _write_arithmetic(payload, [difference + bound for difference in differences], 2 * bound + 1)
    elif mode is MvCodingMode.P_BAR_G:
        eg_modified_encode(payload, values, majority_sign(values))
    else:
        bound = max(abs(value) for value in values)
        payload.write_uint(bound - 1, plain_range_bits(width))
        _write_arithmetic(payload, [value + bound if value < 0 else value + bound - 1 for value in values], 2 * bound)
    return payload


def encode_mvs(
    rects: Sequence[CuRect],
    mvs: Sequence[MotionVector],
    grid_shape: tuple[int, int],
    search_width: int,
    sink: BitWriter,
) -> MvCodingReport:
    """Writes the non-zero MV components of a frame with the cheapest MV coding mode.

    Args:
        rects: The InterM CUs, in MV order.
        mvs: Their motion vectors.
        grid_shape: The (rows, cols) of the 8×8 grid.
        search_width: ω, bounding every component.
        sink: The frame bit sink.

    Raises:
        CodecInvariantError: A motion vector is zero or exceeds the search width.

    Returns:
        The chosen mode, the bits written and the payload size of every mode.
    """
    for rect, mv in zip(rects, mvs):
        if mv.is_zero or max(abs(mv.x), abs(mv.y)) > search_width:
            raise CodecInvariantError(f"motion vector {mv} of the CU at {rect.grid_cell} cannot be coded")

    predictor = MedianPredictor(rects, grid_shape)
    payloads = {mode: _payload(mode, mvs, predictor, search_width) for mode in MvCodingMode}
    chosen = min(payloads, key=lambda mode: (len(payloads[mode]), int(mode)))

    start = len(sink)
    sink.write_uint(int(chosen), MODE_SIGNAL_BITS)
    sink.extend(payloads[chosen])
    report = MvCodingReport(
        chosen, len(sink) - start, len(_slots(mvs)), {mode: len(payload) for mode, payload in payloads.items()}
    )
    messages.debug(f"motion vectors: {report.components} components, {chosen.name} in {report.bits} bits")
    return report


def _read_arithmetic(source: BitReader, count: int, alphabet: int) -> list[int]:
    decoder = ArithmeticDecoder(source)
    model = AdaptiveModel(1, alphabet)
    return [decoder.decode_symbol(model, 0) for _ in range(count)]


def decode_mvs(
    source: BitReader,
    rects: Sequence[CuRect],
    nonzero: Sequence[tuple[bool, bool]],
    grid_shape: tuple[int, int],
    search_width: int,
) -> tuple[list[MotionVector], MvCodingReport]:
    """Reads the motion vectors written by `encode_mvs`.

    Args:
        source: The stream, positioned at the MV mode signal.
        rects: The InterM CUs, in MV order.
        nonzero: Per CU, whether its x and y components are non-zero, from the mvz map.
        grid_shape: The (rows, cols) of the 8×8 grid.
        search_width: ω.

    Raises:
        DecodeError: A decoded component is zero where the mvz map says otherwise, or exceeds ω.
    """
    start = source.position
    mode = MvCodingMode(source.read_uint(MODE_SIGNAL_BITS))
    slots = [MvSlot(cu, component) for cu, flags in enumerate(nonzero) for component in (0, 1) if flags[component]]
    components = [[0, 0] for _ in rects]
    predictor = MedianPredictor(rects, grid_shape)

    def store(slot: MvSlot, value: int) -> None:
        if value == 0 or abs(value) > search_width:
            raise DecodeError(f"invalid motion vector component {value}", source.position)
        components[slot.cu][slot.component] = value

    def predicted(read: Callable[[], int]) -> None:
        for slot in slots:
            store(slot, predictor.predict(slot.cu, slot.component, components) + read())

    if mode is MvCodingMode.PG:
        predicted(source.read_se)
    elif mode is MvCodingMode.PA:
        bound = source.read_uint(predicted_range_bits(search_width)) + 1
        differences = iter(_read_arithmetic(source, len(slots), 2 * bound + 1))
        predicted(lambda: next(differences) - bound)
    elif mode is MvCodingMode.P_BAR_G:
        values, _ = eg_modified_decode(source, len(slots))
        for slot, value in zip(slots, values):
            store(slot, value)
    else:
        bound = source.read_uint(plain_range_bits(search_width)) + 1
        for slot, symbol in zip(slots, _read_arithmetic(source, len(slots), 2 * bound)):
            store(slot, symbol - bound if symbol < bound else symbol - bound + 1)

    mvs = [MotionVector(x, y) for x, y in components]
    return mvs, MvCodingReport(mode, source.position - start, len(slots))
