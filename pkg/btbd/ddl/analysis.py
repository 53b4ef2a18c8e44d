from dataclasses import dataclass


@dataclass(frozen=True)
class RdPoint:
    """One rate-distortion operating point.

    Attributes:
        bitrate: Bits per pixel, positive.
        distortion: PSNR in dB.
    """

    bitrate: float
    distortion: float


@dataclass(frozen=True)
class BdMetrics:
    """Bjøntegaard deltas of a test curve against an anchor curve.

    Attributes:
        bd_br: Average bitrate difference in percent, negative is a saving.
        bd_psnr: Average PSNR difference in dB, positive is an improvement.
    """

    bd_br: float
    bd_psnr: float


@dataclass(frozen=True)
class ResidualStatistics:
    zero_proportion: float
    dynamic_range: int
    coded: int


@dataclass(frozen=True)
class SequenceStats:
    """Rate and distortion summary of a coded sequence.

    Attributes:
        bpp: Coded bits per original pixel.
        compression_ratio: 8 / bpp.
        psnr: PSNR of the pooled MSE over all frames, infinite when lossless.
        zero_proportion: Proportion of zero quantised-residual ranks, None when unknown.
    """

    bpp: float
    compression_ratio: float
    psnr: float
    zero_proportion: float | None = None
