"""
Intra prediction with the gradient-adjusted predictor, full-pel motion search and motion compensation.

Reconstructed samples are read from plain (height, width) integer grids. Which samples may be read is
governed by an availability mask that is set as samples get reconstructed in coding order: CTUs in raster
order, leaf CUs in z-order and pixels in raster order inside a CU. Without a mask every sample inside the
frame and before the predicted one in raster order counts as available.
"""
from typing import Callable, Optional

import numpy as np

from btbd.codec import quantizer
from btbd.ddl.coding import MotionVector, ResidualBlock
from btbd.ddl.frames import CuRect, DepthFrame, MAX_SAMPLE

# Prediction of a sample that has neither a left nor an upper neighbour.
DEFAULT_PREDICTION = 128

# Neighbour offsets (row, col) in the order W, N, NW, NE, WW, NN, NNE.
_NEIGHBOURS = ((0, -1), (-1, 0), (-1, -1), (-1, 1), (0, -2), (-2, 0), (-2, 1))

# Large and small diamond search patterns as (x, y) offsets.
LARGE_DIAMOND = ((0, -2), (-1, -1), (1, -1), (-2, 0), (2, 0), (-1, 1), (1, 1), (0, 2))
SMALL_DIAMOND = ((0, -1), (-1, 0), (1, 0), (0, 1))

ResidualSource = Callable[[int, int, int], int]


def _samples(frame: DepthFrame | np.ndarray) -> np.ndarray:
    return frame.samples if isinstance(frame, DepthFrame) else frame


def gap_value(w: int, n: int, nw: int, ne: int, ww: int, nn: int, nne: int) -> int:
    """Evaluates the gradient-adjusted predictor on resolved neighbour values.

    The blend between the horizontal and vertical estimates is done on scaled integer sums and rounded
    half up, so the scalar and the vectorised predictors agree exactly.
    """
    d_h = abs(w - ww) + abs(n - nw) + abs(n - ne)
    d_v = abs(w - nw) + abs(n - nn) + abs(ne - nne)
    if d_v - d_h > 80:
        return w
    if d_h - d_v > 80:
        return n

    base = 2 * (w + n) + (ne - nw)
    if d_v - d_h > 32:
        numerator, denominator = base + 4 * w, 8
    elif d_v - d_h > 8:
        numerator, denominator = 3 * base + 4 * w, 16
    elif d_h - d_v > 32:
        numerator, denominator = base + 4 * n, 8
    elif d_h - d_v > 8:
        numerator, denominator = 3 * base + 4 * n, 16
    else:
        numerator, denominator = base, 4

    return min(max((numerator + denominator // 2) // denominator, 0), MAX_SAMPLE)


def gap_predict(
    reconstructed: DepthFrame | np.ndarray, row: int, col: int, available: Optional[np.ndarray] = None
) -> int:
    """Predicts one sample from its causal neighbours W, N, NW, NE, WW, NN and NNE.

    Unavailable neighbours fall back to the nearest available one: W and N to each other, NW, NE and NN
    to N, WW to W and NNE to NE. With neither W nor N available the prediction is 128.

    Args:
        reconstructed: The reconstruction of the frame so far.
        row: The row of the predicted sample.
        col: The column of the predicted sample.
        available: Which samples are already reconstructed, raster-causal when omitted.

    Returns:
        The prediction in [0, 255].
    """
    samples = _samples(reconstructed)
    height, width = samples.shape
    values: list[Optional[int]] = []
    for d_row, d_col in _NEIGHBOURS:
        r, c = row + d_row, col + d_col
        usable = 0 <= r < height and 0 <= c < width and (available is None or bool(available[r, c]))
        values.append(int(samples[r, c]) if usable else None)

    w, n, nw, ne, ww, nn, nne = values
    if w is None and n is None:
        return DEFAULT_PREDICTION
    w = n if w is None else w
    n = w if n is None else n
    nw = n if nw is None else nw
    ne = n if ne is None else ne
    nn = n if nn is None else nn
    ww = w if ww is None else ww
    nne = ne if nne is None else nne
    return gap_value(w, n, nw, ne, ww, nn, nne)


def intra_scan(
    reconstructed: np.ndarray, available: np.ndarray, rect: CuRect, residual_source: ResidualSource
) -> None:
    """Reconstructs a CU sample by sample in raster order.

    Every reconstructed sample is written back and marked available before the next one is predicted.

    Args:
        reconstructed: The frame reconstruction, updated in place.
        available: The availability mask, updated in place.
        rect: The CU.
        residual_source: Called with (row, col, prediction), returns the reconstructed sample.
    """
    for row in range(rect.row, rect.row + rect.size):
        for col in range(rect.col, rect.col + rect.size):
            prediction = gap_predict(reconstructed, row, col, available)
            reconstructed[row, col] = residual_source(row, col, prediction)
            available[row, col] = True


def intra_predict_lossless(current: np.ndarray, available: np.ndarray, rect: CuRect) -> np.ndarray:
    """Predicts a whole CU at once for lossless coding, where the reconstruction equals the source.

    Every in-block neighbour precedes its sample in raster order, so it is available and holds its source
    value; neighbours outside the block are taken from `current` where `available` allows.

    Args:
        current: The source frame samples, equal to the reconstruction wherever `available` is set.
        available: The availability mask before the CU is coded.
        rect: The CU.

    Returns:
        The m×m grid of predictions, identical to `intra_scan` with a lossless residual source.
    """
    height, width = current.shape
    rows, cols = np.mgrid[rect.slices]
    inside = []
    resolved = []
    for d_row, d_col in _NEIGHBOURS:
        r, c = rows + d_row, cols + d_col
        in_frame = (r >= 0) & (r < height) & (c >= 0) & (c < width)
        r_safe, c_safe = np.clip(r, 0, height - 1), np.clip(c, 0, width - 1)
        in_block = (r >= rect.row) & (r < rect.row + rect.size) & (c >= rect.col) & (c < rect.col + rect.size)
        inside.append(in_frame & (in_block | available[r_safe, c_safe]))
        resolved.append(current[r_safe, c_safe].astype(np.int64))

    w_ok, n_ok, nw_ok, ne_ok, ww_ok, nn_ok, nne_ok = inside
    w, n, nw, ne, ww, nn, nne = resolved
    w = np.where(w_ok, w, n)
    n = np.where(n_ok, n, w)
    nw = np.where(nw_ok, nw, n)
    ne = np.where(ne_ok, ne, n)
    nn = np.where(nn_ok, nn, n)
    ww = np.where(ww_ok, ww, w)
    nne = np.where(nne_ok, nne, ne)

    d_h = np.abs(w - ww) + np.abs(n - nw) + np.abs(n - ne)
    d_v = np.abs(w - nw) + np.abs(n - nn) + np.abs(ne - nne)
    base = 2 * (w + n) + (ne - nw)
    numerator = np.select(
        [d_v - d_h > 32, d_v - d_h > 8, d_h - d_v > 32, d_h - d_v > 8],
        [base + 4 * w, 3 * base + 4 * w, base + 4 * n, 3 * base + 4 * n],
        base,
    )
    denominator = np.select([d_v - d_h > 32, d_v - d_h > 8, d_h - d_v > 32, d_h - d_v > 8], [8, 16, 8, 16], 4)
    blended = np.clip((numerator + denominator // 2) // denominator, 0, MAX_SAMPLE)

    prediction = np.select([d_v - d_h > 80, d_h - d_v > 80], [w, n], blended)
    return np.where(w_ok | n_ok, prediction, DEFAULT_PREDICTION)


def intra_predict_cu(
    reconstructed: DepthFrame | np.ndarray, rect: CuRect, available: Optional[np.ndarray] = None
) -> np.ndarray:
    """Predicts a CU whose samples are already reconstructed, as the decoder saw them while decoding it.

    Args:
        reconstructed: A frame holding final reconstructed values, including those inside `rect`.
        rect: The CU.
        available: The availability mask before the CU was coded. When omitted, the samples above the CU
            and to its left count as available.

    Returns:
        The m×m grid of GAP predictions.
    """
    samples = _samples(reconstructed)
    mask = _raster_mask(samples.shape, rect) if available is None else available
    return intra_predict_lossless(samples.astype(np.int64), mask, rect)


def intra_reconstruct_cu(
    reconstructed: np.ndarray, available: np.ndarray, rect: CuRect, ranks: np.ndarray, q: int
) -> None:
    """Decodes the ranks of an intra CU into `reconstructed`, marking its samples available."""
    r_max = quantizer.quantized_range(q)

    def reconstruct(row: int, col: int, prediction: int) -> int:
        level = int(quantizer.prediction_level(prediction, q))
        quantized = quantizer.rank_unmap(int(ranks[row - rect.row, col - rect.col]), level, r_max)
        return quantizer.reconstruct(prediction, quantized, q)

    intra_scan(reconstructed, available, rect, reconstruct)


def _raster_mask(shape: tuple[int, ...], rect: CuRect) -> np.ndarray:
    """Availability of every sample before `rect` in plain raster order."""
    mask = np.zeros(shape, dtype=bool)
    mask[: rect.row, :] = True
    mask[rect.row : rect.row + rect.size, : rect.col] = True
    return mask


def block_fits(frame_shape: tuple[int, ...], rect: CuRect, mv: MotionVector) -> bool:
    """Tells whether the reference block addressed by `mv` lies inside the frame."""
    height, width = frame_shape[0], frame_shape[1]
    top, left = rect.row - mv.y, rect.col - mv.x
    return 0 <= top and top + rect.size <= height and 0 <= left and left + rect.size <= width


def motion_compensate(reference: DepthFrame | np.ndarray, rect: CuRect, mv: MotionVector) -> np.ndarray:
    """Fetches the reference block that predicts `rect` under `mv`.

    Content moved by (x, y) from the reference to the current frame, so the block at (row, col) is predicted
    from the reference at (row - y, col - x).
    """
    samples = _samples(reference)
    top, left = rect.row - mv.y, rect.col - mv.x
    return samples[top : top + rect.size, left : left + rect.size]


def sad(current: DepthFrame | np.ndarray, reference: DepthFrame | np.ndarray, rect: CuRect, mv: MotionVector) -> int:
    """Sum of absolute differences between a CU and its motion-compensated reference block."""
    block = _samples(current)[rect.slices].astype(np.int64)
    return int(np.abs(block - motion_compensate(reference, rect, mv).astype(np.int64)).sum())


def _search_key(cost: int, mv: MotionVector) -> tuple[int, int, int, int]:
    return cost, abs(mv.x) + abs(mv.y), mv.y, mv.x


def diamond_search(
    current: DepthFrame | np.ndarray, rect: CuRect, reference: DepthFrame | np.ndarray, search_width: int
) -> tuple[MotionVector, int]:
    """Finds a motion vector with the large-then-small diamond search, starting at zero motion.

    The large diamond moves until its centre is the best of its points, then one small-diamond step refines
    the result. Candidates outside [-search_width, search_width]² or reaching outside the frame are skipped.
    Ties go to the smaller |x| + |y|, then the smaller y, then the smaller x.

    Args:
        current: The frame being coded.
        rect: The CU to match.
        reference: The reconstructed previous frame.
        search_width: The largest allowed absolute MV component.

    Returns:
        The best motion vector and its SAD.
    """
    shape = _samples(reference).shape
    costs: dict[MotionVector, tuple[int, int, int, int]] = {}

    def key(mv: MotionVector) -> Optional[tuple[int, int, int, int]]:
        if max(abs(mv.x), abs(mv.y)) > search_width or not block_fits(shape, rect, mv):
            return None
        if mv not in costs:
            costs[mv] = _search_key(sad(current, reference, rect, mv), mv)
        return costs[mv]

    def step(centre: MotionVector, pattern: tuple[tuple[int, int], ...]) -> MotionVector:
        best = centre
        for d_x, d_y in pattern:
            candidate = MotionVector(centre.x + d_x, centre.y + d_y)
            candidate_key = key(candidate)
            if candidate_key is not None and candidate_key < costs[best]:
                best = candidate
        return best

    centre = MotionVector(0, 0)
    key(centre)
    while (moved := step(centre, LARGE_DIAMOND)) != centre:
        centre = moved
    centre = step(centre, SMALL_DIAMOND)

    return centre, costs[centre][0]


def full_search(
    current: DepthFrame | np.ndarray, rect: CuRect, reference: DepthFrame | np.ndarray, search_width: int
) -> tuple[MotionVector, int]:
    """Exhaustive search over every valid motion vector, with the tie-break order of `diamond_search`."""
    shape = _samples(reference).shape
    best: Optional[tuple[tuple[int, int, int, int], MotionVector]] = None
    for y in range(-search_width, search_width + 1):
        for x in range(-search_width, search_width + 1):
            mv = MotionVector(x, y)
            if not block_fits(shape, rect, mv):
                continue
            candidate = _search_key(sad(current, reference, rect, mv), mv)
            if best is None or candidate < best[0]:
                best = (candidate, mv)

    assert best is not None
    return best[1], best[0][0]


def compute_residual(current: DepthFrame | np.ndarray, rect: CuRect, prediction: np.ndarray) -> ResidualBlock:
    """Subtracts a predicted block from the CU samples."""
    block = _samples(current)[rect.slices].astype(np.int64)
    return ResidualBlock(rect, block - prediction.astype(np.int64))
