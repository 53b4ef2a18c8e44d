import argparse
from dataclasses import dataclass
from typing import Optional

from btbd.analysis import report_residual_statistics, sequence_stats, tsg_psnr
from btbd.codec import decode_sequence
from btbd.core import messages
from btbd.ddl.analysis import ResidualStatistics, SequenceStats
from btbd.ddl.commands import CommandInterface
from btbd.utils import files

from ._options import add_dimension_arguments, add_format_argument, load_sequence


def stats_table(stats: SequenceStats, q: Optional[int] = None) -> list[list[str]]:
    """Formats sequence statistics, adding the PSNR the zero proportion predicts for a near-lossless q."""
    rows = [
        ["bpp", f"{stats.bpp:.4f}"],
        ["compression ratio", f"{stats.compression_ratio:.2f}x"],
        ["PSNR (dB)", f"{stats.psnr:.2f}"],
        ["zero proportion p", "n/a" if stats.zero_proportion is None else f"{stats.zero_proportion:.4f}"],
    ]
    if q is not None and q > 1 and stats.zero_proportion is not None and 0 < stats.zero_proportion < 1:
        rows.append(["predicted PSNR (dB)", f"{tsg_psnr(stats.zero_proportion, q):.2f}"])
    return rows


def _coded_size(bits: str) -> tuple[int, Optional[ResidualStatistics], Optional[int]]:
    if bits.isdigit():
        return int(bits), None, None

    data = files.read_bytes(bits)
    decoded = decode_sequence(data)
    return len(data) * 8, report_residual_statistics(decoded.reports), decoded.header.q


@dataclass
class Stats(CommandInterface):
    """Built-in 'stats' command."""

    name: str = "stats"
    help: str = "Compares an original and a decoded sequence: bpp, compression ratio, PSNR and zero proportion."

    def run(self, args: argparse.Namespace) -> None:
        """Prints rate and distortion statistics of a coded sequence.

        --bits takes either a bit count or the path of the stream; only a stream yields the zero proportion
        of its residual ranks. Raw sequences take --width, --height and --frames.

        Args:
            args: The arguments provided by the caller.
        """
        original = load_sequence(args.original, args, args.format)
        decoded = load_sequence(args.decoded, args, args.format)
        bits, residuals, q = _coded_size(args.bits)

        stats = sequence_stats(original, decoded, bits, residuals)
        messages.table(stats_table(stats, q))

    def setup_parser(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--original", required=True, help="The source sequence.")
        parser.add_argument("--decoded", required=True, help="The decoded sequence.")
        parser.add_argument("--bits", required=True, help="The coded size in bits, or the stream itself.")
        add_format_argument(parser, "--format", "sequence")
        add_dimension_arguments(parser)
