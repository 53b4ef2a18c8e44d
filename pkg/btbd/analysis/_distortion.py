from btbd.codec.frames import mse, mse_to_psnr
from btbd.core.exceptions import InputError

RELATIVE_TOLERANCE = 1e-12


def tsg_mse(zero_proportion: float, q: int) -> float:
    """Predicts the MSE of quantising two-sided geometric residuals with step q.

    The residual distribution is parameterised by its proportion of zeros p, which fixes the decay
    θ = (1 - p) / (1 + p). For every reconstruction error k in 1..D, D = (q - 1) / 2, the probability mass of
    the residuals that quantise to it is summed until a term drops below 1e-12 of the running sum.

    Args:
        zero_proportion: p, strictly between 0 and 1.
        q: The odd quantisation step, at least 3.

    Raises:
        InputError: p is outside (0, 1) or q is not an odd step of at least 3.

    Returns:
        The expected mean squared error per sample.
    """
    if not 0 < zero_proportion < 1:
        raise InputError(f"the zero proportion must lie in (0, 1), got {zero_proportion}")
    if q < 3 or q % 2 == 0:
        raise InputError(f"q must be odd and at least 3, got {q}")

    decay = (1 - zero_proportion) / (1 + zero_proportion)
    total = 0.0
    for error in range(1, (q - 1) // 2 + 1):
        series = 0.0
        period = 0
        while True:
            term = decay ** (period * q + (error if period % 2 == 0 else -error))
            series += term
            # An underflowed first term leaves the sum at zero.
            if term == 0.0 or term < RELATIVE_TOLERANCE * series:
                break
            period += 1
        total += error * error * series

    return 2 * zero_proportion * total


def tsg_psnr(zero_proportion: float, q: int) -> float:
    return mse_to_psnr(tsg_mse(zero_proportion, q))


__all__ = ["mse", "mse_to_psnr", "tsg_mse", "tsg_psnr"]
