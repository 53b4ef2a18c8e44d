"""
Frame-level data maps: forming them from CTU decisions, and recovering CU geometry and don't-care masks from
maps that were already decoded.
"""
from typing import Iterable, Sequence

import numpy as np

from btbd.codec import quantizer
from btbd.core.exceptions import CodecInvariantError
from btbd.ddl.coding import CtuDecisionTree, CuDecision, PredictionMode
from btbd.ddl.frames import CTU_SIZE, CuRect
from btbd.ddl.maps import DataMap, FrameMaps, MapKind

GRID = 8


def div_dontcare(parent: DataMap) -> np.ndarray:
    """Derives the don't-care mask of the next division map: children of undivided or don't-care CUs."""
    skipped = parent.dontcare | (parent.symbols == 0)
    return np.repeat(np.repeat(skipped, 2, axis=1), 2, axis=2)


def leaf_rects(div64: DataMap, div32: DataMap, div16: DataMap) -> list[CuRect]:
    """Rebuilds the leaf CUs of a frame from its division maps.

    Returns:
        The leaf CUs in coding order: CTUs in raster order, leaves of a CTU in z-order.
    """
    flags = {CTU_SIZE: div64.symbols[0], 32: div32.symbols[0], 16: div16.symbols[0]}
    rects: list[CuRect] = []

    def visit(rect: CuRect) -> None:
        if rect.size > GRID and flags[rect.size][rect.row // rect.size, rect.col // rect.size]:
            for child in rect.quadrants():
                visit(child)
        else:
            rects.append(rect)

    rows, cols = div64.symbols.shape[1:]
    for row in range(rows):
        for col in range(cols):
            visit(CuRect(row * CTU_SIZE, col * CTU_SIZE, CTU_SIZE))

    return rects


def significance_map(rects: Iterable[CuRect], grid_shape: tuple[int, int]) -> np.ndarray:
    """Marks the top-left 8×8 cell of every leaf CU with 0 and every other cell with 1."""
    significance = np.ones(grid_shape, dtype=np.uint8)
    for rect in rects:
        significance[rect.grid_cell] = 0
    return significance


def cover_index(rects: Iterable[CuRect], grid_shape: tuple[int, int]) -> np.ndarray:
    """Maps every 8×8 cell to the flat index of the top-left cell of the leaf CU covering it."""
    cover = np.zeros((1, *grid_shape), dtype=np.int64)
    for rect in rects:
        row, col = rect.grid_cell
        cover[0, row : row + rect.grid_size, col : col + rect.grid_size] = row * grid_shape[1] + col
    return cover


def mode_dontcare(significance: np.ndarray) -> np.ndarray:
    return (significance == 1)[None]


def mvz_dontcare(mode: DataMap, significance: np.ndarray) -> np.ndarray:
    """Both MV planes are coded only at the top-left cell of InterM CUs."""
    coded = (significance == 0) & (mode.symbols[0] == PredictionMode.INTER_M)
    return np.repeat(~coded[None], 2, axis=0)


def residual_dontcare(rects: Iterable[CuRect], mode: DataMap, frame_shape: tuple[int, int]) -> np.ndarray:
    """Samples of Skip CUs carry no residual."""
    dontcare = np.zeros((1, *frame_shape), dtype=bool)
    for rect in rects:
        if mode.symbols[0][rect.grid_cell] == PredictionMode.SKIP:
            dontcare[0][rect.slices] = True
    return dontcare


def _division_flags(trees: Sequence[CtuDecisionTree], size: int, frame_shape: tuple[int, int]) -> np.ndarray:
    height, width = frame_shape
    flags = np.zeros((1, height // size, width // size), dtype=np.uint8)
    for tree in trees:
        for row in range(tree.rect.row, tree.rect.row + CTU_SIZE, size):
            for col in range(tree.rect.col, tree.rect.col + CTU_SIZE, size):
                flags[0, row // size, col // size] = 1 if tree.is_split(CuRect(row, col, size)) else 0
    return flags


def form_maps(trees: Sequence[CtuDecisionTree], frame_shape: tuple[int, int], q: int = 1) -> FrameMaps:
    """Assembles the data maps of a frame from its CTU decisions.

    Args:
        trees: The decision tree of every CTU, in raster order.
        frame_shape: The padded (height, width) of the frame.
        q: The quantisation step of the residual ranks.

    Raises:
        CodecInvariantError: The decisions are inconsistent with each other or with the frame.

    Returns:
        All six maps and the significance map.
    """
    height, width = frame_shape
    grid_shape = (height // GRID, width // GRID)

    top_level = _division_flags(trees, CTU_SIZE, frame_shape)
    div64 = DataMap(MapKind.DIV64, top_level, np.zeros(top_level.shape, dtype=bool), 1)
    div32 = DataMap(MapKind.DIV32, _division_flags(trees, 32, frame_shape), div_dontcare(div64), 1)
    div16 = DataMap(MapKind.DIV16, _division_flags(trees, 16, frame_shape), div_dontcare(div32), 1)

    decisions: list[CuDecision] = [leaf for tree in trees for leaf in tree.leaves()]
    rects = leaf_rects(div64, div32, div16)
    if rects != [decision.rect for decision in decisions]:
        raise CodecInvariantError("division maps disagree with the leaf CUs")

    significance = significance_map(rects, grid_shape)
    mode_symbols = np.zeros((1, *grid_shape), dtype=np.uint8)
    mvz_symbols = np.zeros((2, *grid_shape), dtype=np.uint8)
    ranks = np.zeros((1, height, width), dtype=np.int64)
    for decision in decisions:
        cell = decision.rect.grid_cell
        mode_symbols[0][cell] = decision.mode
        if decision.mode == PredictionMode.INTER_M:
            if decision.mv.is_zero:
                raise CodecInvariantError(f"InterM CU at {cell} has a zero motion vector")
            mvz_symbols[0][cell] = decision.mv.x != 0
            mvz_symbols[1][cell] = decision.mv.y != 0
        elif not decision.mv.is_zero:
            raise CodecInvariantError(f"{decision.mode.name} CU at {cell} has a motion vector")

        if decision.mode == PredictionMode.SKIP and decision.ranks.any():
            raise CodecInvariantError(f"Skip CU at {cell} has a residual")
        ranks[0][decision.rect.slices] = decision.ranks

    mode = DataMap(MapKind.MODE, mode_symbols, mode_dontcare(significance), 3, cover=cover_index(rects, grid_shape))
    mvz = DataMap(MapKind.MVZ, mvz_symbols, mvz_dontcare(mode, significance), 1)

    residual_mask = residual_dontcare(rects, mode, frame_shape)
    coded = ranks[~residual_mask]
    bound = max(1, int(coded.max())) if coded.size else 1
    if bound > quantizer.quantized_range(q):
        raise CodecInvariantError(f"rank {bound} exceeds the quantised range of q={q}")
    residual = DataMap(MapKind.RESIDUAL, np.where(residual_mask, 0, ranks), residual_mask, bound, step=q)

    return FrameMaps(div64, div32, div16, mode, mvz, residual, significance)
