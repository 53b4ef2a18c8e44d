"""
Context modelling, code-length estimation and the greedy binary-tree decomposition of data maps.

A map region is priced by the zero-order entropy of its symbols within each context plus an estimate of
the model cost an adaptive arithmetic coder pays while it learns the per-context statistics. The
decomposition keeps cutting a region into two cuboids as long as coding the halves separately, plus the
signalling of the cut, is estimated to be cheaper than coding the region as one.
"""
from typing import Iterator, Optional

import numpy as np

from btbd.codec import quantizer
from btbd.core import messages
from btbd.ddl.maps import DataMap, MapClass, MapKind
from btbd.ddl.partition import (
    SPLIT_AXES,
    Leaf,
    LeafType,
    PartitionStatistics,
    PartitionTree,
    Region,
    Split,
    SplitAxis,
    SplitCandidate,
)
from btbd.entropy import NodeKind, tree_node_code

# Upper bounds of the magnitude-sum bins 0, 1 and 2 of residual contexts; larger sums fall into bin 3.
RESIDUAL_BIN_STARTS = (5, 23, 118)

P_HAT_FLOOR = 1e-9

SPLIT_NODES = {SplitAxis.X: NodeKind.SPLIT_X, SplitAxis.Y: NodeKind.SPLIT_Y, SplitAxis.P: NodeKind.SPLIT_P}


def _nominal_base(datamap: DataMap) -> int:
    return 2 if datamap.is_bitmap else 4


def neighbour_values(datamap: DataMap) -> np.ndarray:
    """Computes what every cell contributes to the contexts of the cells after it.

    Don't-care cells contribute 0, except in mode maps where they take the code word of the leaf CU covering
    them. Residual cells contribute the magnitude of their dequantised residual, estimated from the rank.
    """
    symbols = datamap.symbols.astype(np.int64)
    if datamap.kind is MapKind.MODE and datamap.cover is not None:
        return symbols.reshape(-1)[datamap.cover.reshape(-1)].reshape(symbols.shape)

    if datamap.kind is MapKind.RESIDUAL:
        symbols = quantizer.rank_magnitude(symbols, datamap.step)

    return np.where(datamap.dontcare, 0, symbols)


def context_map(datamap: DataMap) -> np.ndarray:
    """Computes the context id of every cell of a map at once.

    Neighbours are the preceding cells along x (left), y (above) and p (previous plane); neighbours outside
    the map count as 0.

    Returns:
        An integer array shaped like the map.
    """
    values = neighbour_values(datamap)
    left = np.zeros_like(values)
    left[:, :, 1:] = values[:, :, :-1]
    above = np.zeros_like(values)
    above[:, 1:, :] = values[:, :-1, :]

    if datamap.kind is MapKind.RESIDUAL:
        return np.digitize(left + above, RESIDUAL_BIN_STARTS)

    plane = np.zeros_like(values)
    plane[1:, :, :] = values[:-1, :, :]
    base = _nominal_base(datamap)
    return left + base * above + base * base * plane


def _neighbour_value(datamap: DataMap, p: int, y: int, x: int) -> int:
    if p < 0 or y < 0 or x < 0:
        return 0

    if datamap.dontcare[p, y, x]:
        if datamap.kind is MapKind.MODE and datamap.cover is not None:
            return int(datamap.symbols.reshape(-1)[datamap.cover[p, y, x]])
        return 0

    value = int(datamap.symbols[p, y, x])
    if datamap.kind is MapKind.RESIDUAL:
        return min(datamap.step * ((value + 1) >> 1), 255)
    return value


def context_of(datamap: DataMap, coord: tuple[int, int, int]) -> int:
    """Computes the context id of one cell from its causal neighbours.

    Only the left, upper and previous-plane neighbours are read, so a decoder can call this while the map is
    still being filled in.

    Args:
        datamap: The (partially decoded) map.
        coord: The (p, y, x) position of the cell.

    Returns:
        The context id, below the context count of the map's context model.
    """
    p, y, x = coord
    left = _neighbour_value(datamap, p, y, x - 1)
    above = _neighbour_value(datamap, p, y - 1, x)
    if datamap.kind is MapKind.RESIDUAL:
        return int(np.digitize(left + above, RESIDUAL_BIN_STARTS))

    base = _nominal_base(datamap)
    return left + base * above + base * base * _neighbour_value(datamap, p - 1, y, x)


def _p_hats(counts: np.ndarray) -> np.ndarray:
    alphabet = counts.shape[-1]
    bound = alphabet - 1
    symbols = np.arange(alphabet, dtype=np.float64)
    total = counts.sum(-1)
    first = (counts * symbols).sum(-1)
    second = (counts * symbols * symbols).sum(-1)
    numerator = (bound + 2) * total - 2 * first
    denominator = (bound + 1) * first - second
    estimate = np.divide(numerator, denominator, out=np.ones_like(numerator), where=denominator != 0)
    return np.clip(estimate, P_HAT_FLOOR, 1.0)


def estimate_p_hat(counts: np.ndarray | list[int]) -> float:
    """Fits a geometric distribution to the symbol counts of one context by the method of moments.

    Args:
        counts: Occurrences of every symbol 0..R.

    Returns:
        The estimated parameter, 1 when every symbol is 0 and clamped to (0, 1] otherwise.
    """
    return float(_p_hats(np.asarray(counts, dtype=np.float64)))


def _model_costs(totals: np.ndarray, bound: int, p_hats: np.ndarray) -> np.ndarray:
    log_totals = np.log2(totals)
    if bound == 1:
        return 0.5 * log_totals

    threshold = 2.0 ** ((1 - np.log2(bound + 1)) / 2)
    exponent = (bound + 1) / log_totals * (threshold - p_hats)
    free_parameters = np.clip(bound / np.exp2(exponent), 1, bound)
    return free_parameters / 2 * log_totals


def model_cost(total: int, bound: int, p_hat: float) -> float:
    """Estimates the bits an adaptive coder spends learning one context.

    Args:
        total: N_i, the number of symbols coded in the context (at least 2).
        bound: R, the largest symbol of the alphabet.
        p_hat: The fitted geometric parameter of the context.

    Returns:
        Half a bit per effective free parameter and per doubling of `total`.
    """
    return float(_model_costs(np.asarray(float(total)), bound, np.asarray(p_hat)))


def histogram_lengths(counts: np.ndarray, bound: int) -> np.ndarray:
    """Estimates code lengths of a batch of per-context histograms.

    Args:
        counts: Symbol counts shaped (batch, contexts, R + 1).
        bound: R.

    Returns:
        The estimated bits per batch entry, 0 for entries holding at most one distinct symbol.
    """
    counts = counts.astype(np.float64)
    totals = counts.sum(-1)
    safe_totals = np.maximum(totals, 2.0)
    information = np.log2(safe_totals)[..., None] - np.log2(np.maximum(counts, 1.0))
    entropy = np.where(counts > 0, counts * information, 0.0).sum(-1)
    costs = _model_costs(safe_totals, bound, _p_hats(counts))
    per_context = np.where(totals >= 2, entropy + costs, 0.0)

    distinct = (counts.sum(1) > 0).sum(-1)
    lengths = np.ceil(per_context.sum(-1) - 1e-9)
    return np.where(distinct <= 1, 0, lengths).astype(np.int64)


class RegionCoster:
    """Prices regions of one map under either the map's own context model or a context-free model.

    Args:
        datamap: The map to price.
        adaptive: Use the map's context model when True, a single context otherwise.
    """

    def __init__(self, datamap: DataMap, adaptive: bool = True) -> None:
        self.datamap = datamap
        self.adaptive = adaptive
        self.contexts = datamap.kind.context_model.context_count if adaptive else 1
        self.alphabet = datamap.alphabet_bound + 1
        self.bins = self.contexts * self.alphabet

        context_ids = context_map(datamap) if adaptive else np.zeros(datamap.shape, dtype=np.int64)
        keys = context_ids * self.alphabet + datamap.symbols.astype(np.int64)
        # Don't-care cells land in one extra bin that is dropped from every histogram.
        self.keys = np.where(datamap.dontcare, self.bins, keys)

    def histogram(self, region: Region) -> np.ndarray:
        counts = np.bincount(self.keys[region.slices].ravel(), minlength=self.bins + 1)[: self.bins]
        return counts.reshape(self.contexts, self.alphabet)

    def length(self, region: Region) -> int:
        return int(histogram_lengths(self.histogram(region)[None], self.datamap.alphabet_bound)[0])

    def split_lengths(self, region: Region, axis: SplitAxis) -> tuple[np.ndarray, np.ndarray]:
        """Prices both halves of every cut of `region` along `axis`.

        Returns:
            The cut positions and the summed estimates of both halves at each position.
        """
        extent = region.extent(axis)
        if not self.datamap.is_bitmap:
            position = -(-(extent - 1) // 2)
            first, second = region.split(axis, position)
            batch = np.stack([self.histogram(first), self.histogram(second)])
            lengths = histogram_lengths(batch, self.datamap.alphabet_bound)
            return np.array([position]), np.array([lengths.sum()])

        keys = np.moveaxis(self.keys[region.slices], axis.value, 0).reshape(extent, -1)
        width = self.bins + 1
        offsets = np.arange(extent)[:, None] * width
        per_slice = np.bincount((keys + offsets).ravel(), minlength=extent * width).reshape(extent, width)
        prefix = np.cumsum(per_slice[:, : self.bins], axis=0)
        firsts = prefix[:-1]
        seconds = prefix[-1][None, :] - firsts

        shape = (extent - 1, self.contexts, self.alphabet)
        bound = self.datamap.alphabet_bound
        lengths = histogram_lengths(firsts.reshape(shape), bound) + histogram_lengths(seconds.reshape(shape), bound)
        return np.arange(1, extent), lengths


def split_signal_bits(map_class: MapClass, axis: SplitAxis, extent: int) -> int:
    """Bits that signal a cut: the tree code of the axis plus, for bitmaps, the cut position."""
    bits = len(tree_node_code(SPLIT_NODES[axis], map_class))
    if map_class is MapClass.BITMAP:
        bits += (extent - 2).bit_length()
    return bits


def split_axes(datamap: DataMap, region: Region) -> list[SplitAxis]:
    """The axes `region` can be cut along, in tie-break order."""
    return [
        axis
        for axis in SPLIT_AXES
        if region.extent(axis) >= 2 and (axis is not SplitAxis.P or (datamap.is_bitmap and datamap.shape[0] > 1))
    ]


def best_split(coster: RegionCoster, region: Region) -> Optional[SplitCandidate]:
    """Finds the cut minimising the flat estimates of both halves plus the cut signalling.

    Bitmaps try every position on every axis; intmaps only the halfway position ceil((ψ - 1) / 2) per axis.
    Ties go to the earlier axis in X, Y, P order, then to the smaller position.

    Returns:
        The best candidate, None when every extent of `region` is one.
    """
    best: Optional[SplitCandidate] = None
    for axis in split_axes(coster.datamap, region):
        positions, lengths = coster.split_lengths(region, axis)
        lengths = lengths + split_signal_bits(coster.datamap.map_class, axis, region.extent(axis))
        index = int(np.argmin(lengths))
        if best is None or int(lengths[index]) < best.bits:
            best = SplitCandidate(axis, int(positions[index]), int(lengths[index]))

    return best


def _classify(coster: RegionCoster, region: Region) -> Optional[Leaf]:
    """Returns the Type I or II leaf of a region holding at most one distinct symbol."""
    present = np.flatnonzero(coster.histogram(region).sum(0))
    if present.size == 0:
        return Leaf(LeafType.I, region)
    if present.size > 1:
        return None
    value = int(present[0])
    return Leaf(LeafType.I if value == 0 else LeafType.II, region, value)


def _decompose(coster: RegionCoster, region: Region) -> PartitionTree:
    leaf = _classify(coster, region)
    if leaf is not None:
        return leaf

    estimate = coster.length(region)
    candidate = best_split(coster, region)
    if candidate is None:
        return Leaf(LeafType.III, region, cost=estimate)

    signal = split_signal_bits(coster.datamap.map_class, candidate.axis, region.extent(candidate.axis))
    if signal >= estimate:
        return Leaf(LeafType.III, region, cost=estimate)

    first_region, second_region = region.split(candidate.axis, candidate.position)
    first = _decompose(coster, first_region)
    second = _decompose(coster, second_region)
    cost = first.cost + second.cost + signal
    if cost < estimate:
        return Split(candidate.axis, candidate.position, region, first, second, estimate, cost)

    return Leaf(LeafType.III, region, cost=estimate)


def btbd(datamap: DataMap, adaptive: bool = True, region: Optional[Region] = None) -> PartitionTree:
    """Greedily partitions a map into cuboids that are cheaper to code separately.

    A region with a single distinct symbol becomes a Type I (zero) or Type II (same non-zero) leaf. Any other
    region is cut at its best split, both halves are decomposed, and the cut is kept only when the realized
    cost of the halves plus the cut signalling stays below the flat estimate of the region.

    Args:
        datamap: The map to partition.
        adaptive: Price regions with the map's context model (True) or context-free (False).
        region: The region to partition, the whole map when omitted.

    Returns:
        The partition tree.
    """
    coster = RegionCoster(datamap, adaptive)
    tree = _decompose(coster, region or Region.of_shape(datamap.shape))
    if messages.is_debugging():
        stats = tree_statistics(tree)
        messages.debug(
            f"{datamap.kind.name.lower()} partition: {stats.leaves} leaves, {stats.splits} splits, "
            f"{tree.cost} estimated bits"
        )
    return tree


def estimate_code_length(datamap: DataMap, region: Optional[Region] = None, adaptive: bool = True) -> int:
    """Estimates the bits of coding a region of a map as one unit.

    Returns:
        The ceiled estimate, 0 for regions with at most one distinct symbol among their codable cells.
    """
    return RegionCoster(datamap, adaptive).length(region or Region.of_shape(datamap.shape))


def leaves(tree: PartitionTree) -> Iterator[Leaf]:
    """Yields the leaves of a partition tree in pre-order."""
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Split):
            stack.extend((node.second, node.first))
        else:
            yield node


def nodes(tree: PartitionTree) -> Iterator[PartitionTree]:
    """Yields every node of a partition tree in pre-order."""
    stack = [tree]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Split):
            stack.extend((node.second, node.first))


def tree_statistics(tree: PartitionTree) -> PartitionStatistics:
    leaf_types = {leaf_type: 0 for leaf_type in LeafType}
    split_counts = {axis: 0 for axis in SplitAxis}
    dimensions = {count: 0 for count in range(4)}
    cells = []
    for node in nodes(tree):
        if isinstance(node, Split):
            split_counts[node.axis] += 1
            continue
        leaf_types[node.leaf_type] += 1
        dimensions[sum(1 for extent in node.region.shape if extent > 1)] += 1
        cells.append(node.region.size)

    return PartitionStatistics(leaf_types, split_counts, dimensions, max(cells), sum(cells) / len(cells))
