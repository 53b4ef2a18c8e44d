import math

import numpy as np
import pytest

from btbd.analysis import tsg_mse, tsg_psnr
from btbd.codec import quantizer
from btbd.core.exceptions import InputError


def test_golden_values() -> None:
    assert tsg_mse(0.8, 15) == pytest.approx(0.2812, abs=1e-4)
    assert tsg_psnr(0.8, 15) == pytest.approx(53.64, abs=0.01)
    assert tsg_mse(0.9, 15) == pytest.approx(0.1173, abs=1e-4)
    assert tsg_psnr(0.9, 15) == pytest.approx(57.44, abs=0.01)


def test_more_zeros_means_less_distortion() -> None:
    for q in (3, 7, 15):
        values = [tsg_mse(p, q) for p in (0.6, 0.7, 0.8, 0.9, 0.95)]
        assert values == sorted(values, reverse=True)


def test_coarser_steps_mean_more_distortion() -> None:
    values = [tsg_mse(0.5, q) for q in range(3, 17, 2)]
    assert values == sorted(values)
    # Never worse than a uniform error over [-D, D].
    assert all(value <= d * (d + 1) / 3 for value, d in zip(values, range(1, 8)))


def test_all_zero_limit() -> None:
    assert tsg_mse(0.99999, 15) < 1e-3
    assert math.isfinite(tsg_psnr(0.99999, 3))


@pytest.mark.parametrize("p", [0.8, 0.9])
def test_matches_quantised_tsg_samples(p: float) -> None:
    decay = (1 - p) / (1 + p)
    rng = np.random.default_rng(12)
    residuals = rng.geometric(1 - decay, 10**6) - rng.geometric(1 - decay, 10**6)
    assert np.mean(residuals == 0) == pytest.approx(p, abs=0.005)

    for q in (3, 7, 15):
        errors = residuals - q * quantizer.quantize_array(residuals, q)
        assert float(np.mean(errors * errors)) == pytest.approx(tsg_mse(p, q), rel=0.05)


def test_rejects_bad_arguments() -> None:
    for p, q in ((0.0, 3), (1.0, 3), (0.5, 1), (0.5, 4), (-0.2, 5)):
        with pytest.raises(InputError):
            tsg_mse(p, q)


def test_underflowing_series_terminates() -> None:
    # With p close to 1 the leading terms underflow to zero for large errors.
    value = tsg_mse(1 - 1e-15, 201)
    assert math.isfinite(value) and value >= 0
    assert tsg_psnr(1 - 1e-15, 201) > 100
