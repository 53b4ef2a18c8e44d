import argparse
from dataclasses import dataclass
from typing import Optional

from btbd.codec import decode_sequence, psnr, store_sequence_file
from btbd.core import messages
from btbd.core.exceptions import InputError
from btbd.ddl.commands import CommandInterface
from btbd.ddl.frames import Sequence
from btbd.ddl.stream import DecodedStream
from btbd.utils import files

from ._options import add_dimension_arguments, add_format_argument, load_sequence

REPORT_HEADERS = ["frame", "type", "bits", "bpp", "map modes", "MV mode"]


def report_table(decoded: DecodedStream, reference: Optional[Sequence] = None) -> list[list[object]]:
    """Builds the per-frame report rows: frame, type, bits, bpp, map modes, MV mode and, with a reference, PSNR."""
    pixels = decoded.sequence.original_width * decoded.sequence.original_height
    rows: list[list[object]] = []
    for report, frame in zip(decoded.reports, decoded.sequence.frames):
        row: list[object] = [
            report.index,
            report.frame_type.name,
            report.bits,
            f"{report.bits / pixels:.4f}",
            " ".join(f"{entry.kind.name.lower()}:{entry.mode.name}" for entry in report.maps),
            "-" if report.mvs is None else report.mvs.mode.name,
        ]
        if reference is not None:
            row.append(f"{psnr(reference.frames[report.index], frame):.2f}")
        rows.append(row)
    return rows


@dataclass
class Decode(CommandInterface):
    """Built-in 'decode' command."""

    name: str = "decode"
    help: str = "Decodes a btbd stream into a raw or PGM depth sequence."

    def run(self, args: argparse.Namespace) -> None:
        """Decodes a stream, optionally printing a per-frame report.

        With --report every frame's type, size, map coding modes and MV coding mode are listed, and the PSNR
        against --reference when one is given. Raw references take --width, --height and --frames.

        Args:
            args: The arguments provided by the caller.
        """
        decoded = decode_sequence(files.read_bytes(args.input))
        store_sequence_file(args.output, decoded.sequence, args.format)

        reference = None
        if args.reference is not None:
            reference = load_sequence(args.reference, args, args.reference_format)
            if len(reference) < len(decoded.sequence):
                raise InputError(f"{args.reference} holds fewer frames than the stream")

        if args.report:
            headers = REPORT_HEADERS + ([] if reference is None else ["PSNR (dB)"])
            messages.table(report_table(decoded, reference), headers)

        messages.success(f"Decoded {len(decoded.sequence)} frames into {args.output}.")

    def setup_parser(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--in", dest="input", required=True, help="The stream to decode.")
        parser.add_argument("--out", dest="output", required=True, help="Where to write the sequence.")
        add_format_argument(parser, "--format", "output")
        parser.add_argument("--report", action="store_true", help="Print a per-frame report.")
        parser.add_argument("--reference", default=None, help="The original sequence, for PSNR in the report.")
        add_format_argument(parser, "--reference-format", "reference")
        add_dimension_arguments(parser)
