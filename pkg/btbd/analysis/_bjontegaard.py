import math
from typing import Sequence

import numpy as np

from btbd.core.exceptions import InputError
from btbd.ddl.analysis import BdMetrics, RdPoint

MIN_CURVE_POINTS = 4
POLYNOMIAL_DEGREE = 3


def _columns(curve: Sequence[RdPoint], name: str) -> tuple[np.ndarray, np.ndarray]:
    if len(curve) < MIN_CURVE_POINTS:
        raise InputError(f"{name} needs at least {MIN_CURVE_POINTS} points, got {len(curve)}")
    for point in curve:
        if point.bitrate <= 0 or not math.isfinite(point.bitrate) or not math.isfinite(point.distortion):
            raise InputError(f"{name} holds an unusable point {point}")

    rates = np.log10(np.array([point.bitrate for point in curve], dtype=np.float64))
    distortions = np.array([point.distortion for point in curve], dtype=np.float64)
    return rates, distortions


def _average_difference(
    x_anchor: np.ndarray, y_anchor: np.ndarray, x_test: np.ndarray, y_test: np.ndarray, axis: str
) -> float:
    low = max(x_anchor.min(), x_test.min())
    high = min(x_anchor.max(), x_test.max())
    if high <= low:
        raise InputError(f"the curves share no {axis} range")

    integrals = []
    for x, y in ((x_anchor, y_anchor), (x_test, y_test)):
        antiderivative = np.polyint(np.polyfit(x, y, POLYNOMIAL_DEGREE))
        integrals.append(np.polyval(antiderivative, high) - np.polyval(antiderivative, low))

    return float((integrals[1] - integrals[0]) / (high - low))


def bd_metrics(anchor: Sequence[RdPoint], test: Sequence[RdPoint]) -> BdMetrics:
    """Computes the Bjøntegaard deltas of `test` against `anchor`.

    Both curves are fitted with least-squares cubics, PSNR over log10(bpp) for BD-PSNR and log10(bpp) over
    PSNR for BD-BR, and the fits are integrated over the range the curves have in common.

    Args:
        anchor: The reference curve.
        test: The curve being compared.

    Raises:
        InputError: A curve has fewer than four points, an unusable point (non-positive bitrate or infinite
            PSNR), or the curves don't overlap.

    Returns:
        BD-BR in percent (negative means `test` needs fewer bits) and BD-PSNR in dB.
    """
    anchor_rates, anchor_psnr = _columns(anchor, "the anchor curve")
    test_rates, test_psnr = _columns(test, "the test curve")

    bd_psnr = _average_difference(anchor_rates, anchor_psnr, test_rates, test_psnr, "bitrate")
    log_rate_difference = _average_difference(anchor_psnr, anchor_rates, test_psnr, test_rates, "PSNR")
    return BdMetrics((10**log_rate_difference - 1) * 100, bd_psnr)
