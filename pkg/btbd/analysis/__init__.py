"""
Rate and distortion analysis: the two-sided geometric distortion model, sequence statistics, coding gains,
Bjøntegaard deltas and rate-distortion curves on disk.
"""
from ._bjontegaard import bd_metrics
from ._distortion import mse, mse_to_psnr, tsg_mse, tsg_psnr
from ._statistics import (
    coding_gain,
    read_rd_csv,
    report_residual_statistics,
    residual_statistics,
    sequence_stats,
    write_rd_csv,
)
