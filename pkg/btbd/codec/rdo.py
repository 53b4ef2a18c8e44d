"""
Rate-only mode decision: every CU takes the prediction mode with the fewest estimated bits, and a CU is
divided into four when its children are estimated to be cheaper, one bit for the division flag included.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from btbd.codec import prediction, quantizer
from btbd.codec.decomposition import estimate_code_length
from btbd.ddl.coding import (
    ZERO_MV,
    CtuDecisionTree,
    CtuNode,
    CuDecision,
    CuSplit,
    FrameType,
    MotionVector,
    PredictionMode,
)
from btbd.ddl.frames import CTU_SIZE, CuRect
from btbd.ddl.maps import DataMap, MapKind

MIN_CU_SIZE = 8
DIVISION_FLAG_BITS = 1


@dataclass
class FrameState:
    """The mutable encoder state of the frame being coded.

    Attributes:
        current: The source samples of the frame.
        reference: The reconstructed previous frame, None for I-frames.
        q: The quantisation step.
        search_width: The motion search range.
        reconstruction: The reconstruction so far, filled in as CUs are committed.
        available: Which samples of `reconstruction` are final.
        motion: Diamond search results per CU, which don't depend on the reconstruction.
    """

    current: np.ndarray
    reference: Optional[np.ndarray]
    q: int = 1
    search_width: int = 32
    reconstruction: np.ndarray = field(init=False)
    available: np.ndarray = field(init=False)
    motion: dict[CuRect, tuple[MotionVector, int]] = field(init=False, default_factory=dict)

    def __post_init__(self) -> None:
        self.current = self.current.astype(np.int64)
        self.reconstruction = np.zeros_like(self.current)
        self.available = np.zeros(self.current.shape, dtype=bool)

    @property
    def frame_type(self) -> FrameType:
        return FrameType.I if self.reference is None else FrameType.P

    def commit(self, decision: CuDecision) -> None:
        """Writes the reconstruction of a chosen CU and marks it available."""
        assert decision.reconstruction is not None
        self.reconstruction[decision.rect.slices] = decision.reconstruction
        self.available[decision.rect.slices] = True

    def snapshot(self, rect: CuRect) -> tuple[np.ndarray, np.ndarray]:
        return self.reconstruction[rect.slices].copy(), self.available[rect.slices].copy()

    def restore(self, rect: CuRect, saved: tuple[np.ndarray, np.ndarray]) -> None:
        self.reconstruction[rect.slices], self.available[rect.slices] = saved


def estimate_mv_bits(mv: MotionVector) -> int:
    """Estimates the signed Exp-Golomb length of both MV components, 2·ceil(log2(|c| + 1)) + 1 each."""
    return sum(2 * abs(component).bit_length() + 1 for component in mv.components)


def estimate_block_bits(ranks: np.ndarray, q: int) -> int:
    """Estimates the code length of one CU's ranks as a standalone residual map."""
    block = ranks.reshape(1, *ranks.shape)
    datamap = DataMap(MapKind.RESIDUAL, block, np.zeros(block.shape, dtype=bool), max(1, int(block.max())), step=q)
    return estimate_code_length(datamap)


def _inter_candidate(
    state: FrameState, rect: CuRect, mode: PredictionMode, mv: MotionVector, extra_bits: int = 0
) -> CuDecision:
    assert state.reference is not None
    predicted = prediction.motion_compensate(state.reference, rect, mv).astype(np.int64)
    residual = prediction.compute_residual(state.current, rect, predicted).values
    quantized = quantizer.quantize_array(residual, state.q)
    r_max = quantizer.quantized_range(state.q)
    ranks = quantizer.rank_map_array(quantized, quantizer.prediction_level(predicted, state.q), r_max)
    reconstruction = quantizer.reconstruct_array(predicted, quantized, state.q)
    return CuDecision(rect, mode, mv, ranks, estimate_block_bits(ranks, state.q) + extra_bits, reconstruction)


def _intra_candidate(state: FrameState, rect: CuRect) -> CuDecision:
    if state.q == 1:
        predicted = prediction.intra_predict_lossless(state.current, state.available, rect)
        residual = prediction.compute_residual(state.current, rect, predicted).values
        ranks = quantizer.rank_map_array(residual, predicted, quantizer.quantized_range(1))
        reconstruction = state.current[rect.slices].copy()
        return CuDecision(rect, PredictionMode.INTRA, ZERO_MV, ranks, estimate_block_bits(ranks, 1), reconstruction)

    q = state.q
    r_max = quantizer.quantized_range(q)
    ranks = np.zeros((rect.size, rect.size), dtype=np.int64)

    def code_sample(row: int, col: int, predicted: int) -> int:
        quantized = quantizer.quantize(int(state.current[row, col]) - predicted, q)
        level = int(quantizer.prediction_level(predicted, q))
        ranks[row - rect.row, col - rect.col] = quantizer.rank_map(quantized, level, r_max)
        return quantizer.reconstruct(predicted, quantized, q)

    saved = state.snapshot(rect)
    prediction.intra_scan(state.reconstruction, state.available, rect, code_sample)
    reconstruction = state.reconstruction[rect.slices].copy()
    state.restore(rect, saved)
    return CuDecision(rect, PredictionMode.INTRA, ZERO_MV, ranks, estimate_block_bits(ranks, q), reconstruction)


def select_cu_mode(rect: CuRect, state: FrameState) -> CuDecision:
    """Picks the prediction mode of a CU with the fewest estimated bits, without committing it.

    I-frames only use Intra. In P-frames a zero-motion block whose quantised residual vanishes is Skip;
    otherwise InterZ, InterM (when the diamond search finds a non-zero MV, MV bits included) and Intra
    compete, ties going to the lower code word.

    Args:
        rect: The CU.
        state: The frame state, whose reconstruction holds every CU coded so far.

    Returns:
        The decision, carrying the ranks and the reconstruction of the CU.
    """
    if state.reference is None:
        return _intra_candidate(state, rect)

    zero_motion = _inter_candidate(state, rect, PredictionMode.INTER_Z, ZERO_MV)
    if not zero_motion.ranks.any():
        return CuDecision(rect, PredictionMode.SKIP, ZERO_MV, zero_motion.ranks, 0, zero_motion.reconstruction)

    candidates = [zero_motion]
    if rect not in state.motion:
        state.motion[rect] = prediction.diamond_search(state.current, rect, state.reference, state.search_width)
    mv, _ = state.motion[rect]
    if not mv.is_zero:
        candidates.append(_inter_candidate(state, rect, PredictionMode.INTER_M, mv, estimate_mv_bits(mv)))
    candidates.append(_intra_candidate(state, rect))

    return min(candidates, key=lambda candidate: (candidate.bits, int(candidate.mode)))


def _build(rect: CuRect, state: FrameState) -> tuple[CtuNode, int]:
    undivided = select_cu_mode(rect, state)
    if rect.size == MIN_CU_SIZE:
        state.commit(undivided)
        return undivided, undivided.bits

    saved = state.snapshot(rect)
    children = tuple(_build(child, state) for child in rect.quadrants())
    divided_bits = sum(bits for _, bits in children) + DIVISION_FLAG_BITS
    if divided_bits < undivided.bits:
        first, second, third, fourth = (node for node, _ in children)
        return CuSplit(rect, (first, second, third, fourth)), divided_bits

    state.restore(rect, saved)
    state.commit(undivided)
    return undivided, undivided.bits


def build_ctu_tree(rect: CuRect, state: FrameState) -> CtuDecisionTree:
    """Decides division and prediction modes of one CTU and commits its reconstruction.

    The undivided CU is priced first; then its four children are decided (and committed) recursively, and the
    division is kept only when the children plus one flag bit cost less than the undivided CU. Otherwise the
    children's reconstruction is rolled back and the undivided CU is committed.

    Args:
        rect: A 64×64 CTU.
        state: The frame state, updated in place.
    """
    assert rect.size == CTU_SIZE
    root, bits = _build(rect, state)
    return CtuDecisionTree(root, bits)
