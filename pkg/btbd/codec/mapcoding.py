"""
Coding of one data map: every eligible coding mode is tried, the shortest payload wins and is written after
its mode signal.

A partitioned payload is the pre-order partition tree followed, when any leaf needs it, by one arithmetic
coded segment holding the values of intmap Type II leaves and the contents of Type III leaves in pre-order.
"""
from typing import Optional

import numpy as np

from btbd.codec import quantizer
from btbd.codec.decomposition import SPLIT_NODES, btbd, context_map, context_of, leaves, split_axes
from btbd.core import messages
from btbd.core.exceptions import DecodeError
from btbd.ddl.maps import DataMap, MapKind
from btbd.ddl.partition import Leaf, LeafType, PartitionTree, Region, Split, SplitAxis
from btbd.ddl.stream import MapCodingMode, MapCodingReport
from btbd.entropy import (
    AdaptiveModel,
    ArithmeticDecoder,
    ArithmeticEncoder,
    BitReader,
    BitWriter,
    NodeKind,
    read_tree_node,
    run_mode_decode,
    run_mode_encode,
    tree_node_code,
)

RESIDUAL_BOUND_BITS = 8

_LEAF_NODES = {LeafType.I: NodeKind.LEAF_I, LeafType.II: NodeKind.LEAF_II, LeafType.III: NodeKind.LEAF_III}
_SPLIT_AXES = {node: axis for axis, node in SPLIT_NODES.items()}
_LEAF_TYPES = {node: leaf_type for leaf_type, node in _LEAF_NODES.items()}


def mode_signal_bits(kind: MapKind) -> int:
    return 3 if kind is MapKind.RESIDUAL else 2


def eligible_modes(kind: MapKind) -> tuple[MapCodingMode, ...]:
    """The run mode only codes residual maps."""
    return tuple(mode for mode in MapCodingMode if mode is not MapCodingMode.RUN or kind is MapKind.RESIDUAL)


def _default_bound(kind: MapKind) -> int:
    return 3 if kind is MapKind.MODE else 1


def _write_tree(sink: BitWriter, datamap: DataMap, tree: PartitionTree) -> None:
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Split):
            sink.write_code(tree_node_code(SPLIT_NODES[node.axis], datamap.map_class))
            if datamap.is_bitmap:
                sink.write_uint(node.position - 1, (node.region.extent(node.axis) - 2).bit_length())
            stack.extend((node.second, node.first))
        else:
            sink.write_code(tree_node_code(_LEAF_NODES[node.leaf_type], datamap.map_class))


def _needs_segment(datamap: DataMap, leaf_list: list[Leaf]) -> bool:
    return any(
        leaf.leaf_type is LeafType.III or (leaf.leaf_type is LeafType.II and not datamap.is_bitmap)
        for leaf in leaf_list
    )


def _leaf_model(datamap: DataMap, adaptive: bool) -> AdaptiveModel:
    contexts = datamap.kind.context_model.context_count if adaptive else 1
    return AdaptiveModel(contexts, datamap.alphabet_bound + 1)


def _write_contents(sink: BitWriter, datamap: DataMap, leaf_list: list[Leaf], adaptive: bool) -> None:
    if not _needs_segment(datamap, leaf_list):
        return

    encoder = ArithmeticEncoder(sink)
    contexts = context_map(datamap) if adaptive else np.zeros(datamap.shape, dtype=np.int64)
    values = AdaptiveModel(1, datamap.alphabet_bound)
    for leaf in leaf_list:
        if leaf.leaf_type is LeafType.II and not datamap.is_bitmap:
            encoder.encode_symbol(values, 0, leaf.value - 1)
        elif leaf.leaf_type is LeafType.III:
            model = _leaf_model(datamap, adaptive)
            codable = ~datamap.dontcare[leaf.region.slices]
            symbols = datamap.symbols[leaf.region.slices][codable].tolist()
            context_ids = contexts[leaf.region.slices][codable].tolist()
            for context, symbol in zip(context_ids, symbols):
                encoder.encode_symbol(model, context, symbol)

    encoder.finish()


def encode_payload(datamap: DataMap, mode: MapCodingMode) -> BitWriter:
    """Codes a map with one coding mode, without the mode signal and the alphabet bound.

    Returns:
        A scratch writer holding the payload.
    """
    payload = BitWriter()
    if mode is MapCodingMode.RUN:
        run_mode_encode(payload, datamap.symbols[~datamap.dontcare].tolist())
        return payload

    region = Region.of_shape(datamap.shape)
    if mode.partitioned:
        tree: PartitionTree = btbd(datamap, mode.adaptive)
        _write_tree(payload, datamap, tree)
    else:
        tree = Leaf(LeafType.III, region)

    _write_contents(payload, datamap, list(leaves(tree)), mode.adaptive)
    return payload


def encode_map(datamap: DataMap, sink: BitWriter) -> MapCodingReport:
    """Writes a map with its cheapest coding mode.

    A map without codable cells is written as its mode signal alone. Residual maps carry their alphabet
    bound R in 8 bits after the mode signal.

    Args:
        datamap: The map to code.
        sink: The frame bit sink.

    Returns:
        The chosen mode, the bits written and the payload size of every eligible mode.
    """
    start = len(sink)
    signal_bits = mode_signal_bits(datamap.kind)
    if datamap.codable == 0:
        sink.write_uint(int(MapCodingMode.PC), signal_bits)
        return MapCodingReport(datamap.kind, MapCodingMode.PC, len(sink) - start)

    payloads = {mode: encode_payload(datamap, mode) for mode in eligible_modes(datamap.kind)}
    chosen = min(payloads, key=lambda mode: (len(payloads[mode]), int(mode)))

    sink.write_uint(int(chosen), signal_bits)
    if datamap.kind is MapKind.RESIDUAL:
        sink.write_uint(datamap.alphabet_bound, RESIDUAL_BOUND_BITS)
    sink.extend(payloads[chosen])

    report = MapCodingReport(
        datamap.kind, chosen, len(sink) - start, {mode: len(payload) for mode, payload in payloads.items()}
    )
    messages.debug(f"{datamap.kind.name.lower()} map: {chosen.name} in {report.bits} bits")
    return report


def _read_tree(source: BitReader, datamap: DataMap) -> list[tuple[LeafType, Region]]:
    leaf_list = []
    stack = [Region.of_shape(datamap.shape)]
    while stack:
        region = stack.pop()
        start = source.position
        node = read_tree_node(source, datamap.map_class)
        if node in _LEAF_TYPES:
            leaf_list.append((_LEAF_TYPES[node], region))
            continue

        axis: SplitAxis = _SPLIT_AXES[node]
        if axis not in split_axes(datamap, region):
            raise DecodeError(f"{axis.name}-split of a region of shape {region.shape}", start)

        extent = region.extent(axis)
        if datamap.is_bitmap:
            position = source.read_uint((extent - 2).bit_length()) + 1
            if position >= extent:
                raise DecodeError(f"split position {position} outside a region of extent {extent}", start)
        else:
            position = -(-(extent - 1) // 2)

        first, second = region.split(axis, position)
        stack.extend((second, first))

    return leaf_list


def _read_contents(
    source: BitReader, datamap: DataMap, leaf_list: list[tuple[LeafType, Region]], adaptive: bool
) -> None:
    symbols = datamap.symbols
    for leaf_type, region in leaf_list:
        if leaf_type is LeafType.II and datamap.is_bitmap:
            symbols[region.slices][~datamap.dontcare[region.slices]] = 1

    if not any(
        leaf_type is LeafType.III or (leaf_type is LeafType.II and not datamap.is_bitmap) for leaf_type, _ in leaf_list
    ):
        return

    decoder = ArithmeticDecoder(source)
    values = AdaptiveModel(1, datamap.alphabet_bound)
    for leaf_type, region in leaf_list:
        if leaf_type is LeafType.II and not datamap.is_bitmap:
            symbols[region.slices][~datamap.dontcare[region.slices]] = decoder.decode_symbol(values, 0) + 1
        elif leaf_type is LeafType.III:
            model = _leaf_model(datamap, adaptive)
            offsets = np.argwhere(~datamap.dontcare[region.slices]) + np.array(region.start)
            for p, y, x in offsets.tolist():
                context = context_of(datamap, (p, y, x)) if adaptive else 0
                symbols[p, y, x] = decoder.decode_symbol(model, context)


def decode_map(
    source: BitReader,
    kind: MapKind,
    dontcare: np.ndarray,
    q: int = 1,
    cover: Optional[np.ndarray] = None,
) -> tuple[DataMap, MapCodingReport]:
    """Reads a map written by `encode_map`.

    Args:
        source: The stream, positioned at the mode signal.
        kind: Which map to expect.
        dontcare: The don't-care mask, derived from earlier maps.
        q: The quantisation step, bounding residual ranks.
        cover: For mode maps, the covering-leaf index of every cell.

    Raises:
        DecodeError: The mode, the alphabet bound, the tree or the arithmetic-coded segment is invalid.

    Returns:
        The decoded map and a report of its size.
    """
    start = source.position
    value = source.read_uint(mode_signal_bits(kind))
    modes = {int(mode): mode for mode in eligible_modes(kind)}
    if value not in modes:
        raise DecodeError(f"invalid coding mode {value} for the {kind.name.lower()} map", start)
    mode = modes[value]

    symbols = np.zeros(dontcare.shape, dtype=np.int64)
    if dontcare.all():
        if mode is not MapCodingMode.PC:
            raise DecodeError(f"empty {kind.name.lower()} map signals mode {value}", start)
        datamap = DataMap(kind, symbols, dontcare, _default_bound(kind), q, cover)
        return datamap, MapCodingReport(kind, mode, source.position - start)

    bound = _default_bound(kind)
    if kind is MapKind.RESIDUAL:
        bound_position = source.position
        bound = source.read_uint(RESIDUAL_BOUND_BITS)
        if not 1 <= bound <= quantizer.quantized_range(q):
            raise DecodeError(f"residual bound {bound} outside [1, {quantizer.quantized_range(q)}]", bound_position)

    datamap = DataMap(kind, symbols, dontcare, bound, q, cover)
    if mode is MapCodingMode.RUN:
        symbols[~dontcare] = run_mode_decode(source, int(np.count_nonzero(~dontcare)), bound)
    else:
        if mode.partitioned:
            leaf_list = _read_tree(source, datamap)
        else:
            leaf_list = [(LeafType.III, Region.of_shape(datamap.shape))]
        _read_contents(source, datamap, leaf_list, mode.adaptive)

    return datamap, MapCodingReport(kind, mode, source.position - start)
