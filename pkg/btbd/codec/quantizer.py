"""
Spatial-domain scalar quantisation of prediction residuals and the rank mapping that turns a signed
(quantised) residual into an unsigned symbol without widening the dynamic range.

Scalar helpers take and return ints; the `*_array` variants apply the same arithmetic element-wise.
"""
import numpy as np

from btbd.core.exceptions import InputError
from btbd.ddl.coding import QuantConfig
from btbd.ddl.frames import MAX_SAMPLE

SUPPORTED_STEPS = tuple(range(1, 16, 2))


def validate_step(q: int) -> QuantConfig:
    """Checks that `q` is a supported odd step and wraps it in a QuantConfig.

    Raises:
        InputError: `q` is even or outside 1..15.
    """
    if q % 2 == 0:
        raise InputError("q must be odd")
    if q not in SUPPORTED_STEPS:
        raise InputError(f"q must be one of {', '.join(str(step) for step in SUPPORTED_STEPS)}")
    return QuantConfig(q)


def quantized_range(q: int) -> int:
    """Returns r_max, the largest quantised sample value, ceil(255 / q)."""
    return QuantConfig(q).r_max


def quantize(residual: int, q: int) -> int:
    """Rounds residual / q to the nearest integer, ties away from zero."""
    magnitude = (2 * abs(residual) + q) // (2 * q)
    return magnitude if residual >= 0 else -magnitude


def quantize_array(residuals: np.ndarray, q: int) -> np.ndarray:
    values = residuals.astype(np.int64)
    return np.sign(values) * ((2 * np.abs(values) + q) // (2 * q))


def prediction_level(prediction: int | np.ndarray, q: int) -> int | np.ndarray:
    """Quantises a prediction in [0, 255] to round(prediction / q); odd steps never produce ties."""
    return (2 * prediction + q) // (2 * q)


def dequantize(quantized: int, q: int) -> int:
    return quantized * q


def reconstruct(prediction: int, quantized: int, q: int) -> int:
    """Adds the dequantised residual to a prediction and clamps the sample to [0, 255]."""
    return min(max(prediction + dequantize(quantized, q), 0), MAX_SAMPLE)


def reconstruct_array(prediction: np.ndarray, quantized: np.ndarray, q: int) -> np.ndarray:
    return np.clip(prediction.astype(np.int64) + quantized * q, 0, MAX_SAMPLE)


def rank_map(quantized: int, predicted: int, r_max: int) -> int:
    """Maps a signed quantised residual to its rank.

    Residuals of both signs interleave by magnitude (non-negative on even ranks, negative on odd ranks)
    until the shorter side of the valid interval [-predicted, r_max - predicted] runs out; the rest of the
    longer side then follows linearly.

    Args:
        quantized: The quantised residual.
        predicted: The quantised prediction, round(x̂ / q).
        r_max: The largest quantised sample value.

    Raises:
        InputError: The residual lies outside the valid interval.

    Returns:
        The rank in [0, r_max].
    """
    if not -predicted <= quantized <= r_max - predicted:
        raise InputError(f"residual {quantized} is impossible for prediction {predicted} and range {r_max}")

    shorter = min(predicted, r_max - predicted)
    if abs(quantized) <= shorter:
        return 2 * quantized if quantized >= 0 else -2 * quantized - 1
    return shorter + abs(quantized)


def rank_unmap(rank: int, predicted: int, r_max: int) -> int:
    """Inverts `rank_map`."""
    shorter = min(predicted, r_max - predicted)
    if rank <= 2 * shorter:
        return rank >> 1 if rank % 2 == 0 else -((rank + 1) >> 1)

    magnitude = rank - shorter
    return magnitude if predicted < r_max - predicted else -magnitude


def rank_map_array(quantized: np.ndarray, predicted: np.ndarray, r_max: int) -> np.ndarray:
    """Element-wise `rank_map` for residuals already known to be valid."""
    quantized = quantized.astype(np.int64)
    predicted = predicted.astype(np.int64)
    shorter = np.minimum(predicted, r_max - predicted)
    interleaved = np.where(quantized >= 0, 2 * quantized, -2 * quantized - 1)
    return np.where(np.abs(quantized) <= shorter, interleaved, shorter + np.abs(quantized))


def rank_unmap_array(ranks: np.ndarray, predicted: np.ndarray, r_max: int) -> np.ndarray:
    ranks = ranks.astype(np.int64)
    predicted = predicted.astype(np.int64)
    shorter = np.minimum(predicted, r_max - predicted)
    interleaved = np.where(ranks % 2 == 0, ranks >> 1, -((ranks + 1) >> 1))
    linear = np.where(predicted < r_max - predicted, ranks - shorter, shorter - ranks)
    return np.where(ranks <= 2 * shorter, interleaved, linear)


def rank_magnitude(ranks: np.ndarray, q: int) -> np.ndarray:
    """Estimates |q·ε_Q| of ranks without knowing the prediction, capped at 255.

    Exact for every rank inside the interleaved region of the rank mapping.
    """
    return np.minimum(q * ((ranks.astype(np.int64) + 1) >> 1), MAX_SAMPLE)
