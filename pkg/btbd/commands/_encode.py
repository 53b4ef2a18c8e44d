import argparse
from dataclasses import dataclass

from btbd.codec import encode_sequence, quantizer
from btbd.codec.sequence import DEFAULT_GOP_PERIOD, DEFAULT_SEARCH_WIDTH, MAX_GOP_PERIOD, MAX_SEARCH_WIDTH
from btbd.core import messages
from btbd.ddl.commands import CommandInterface
from btbd.utils import files

from ._options import add_dimension_arguments, add_format_argument, load_sequence, positive, setting
from .exceptions import InvalidStepError

MAX_THREADS = 256


def resolve_step(value: object) -> int:
    """Checks the quantisation step given on the command line or in the configuration.

    Raises:
        InvalidStepError: q is even, or not a step in 1..15.
    """
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidStepError(f"q must be an odd integer, got {value!r}")
    if value % 2 == 0:
        raise InvalidStepError("q must be odd")
    if value not in quantizer.SUPPORTED_STEPS:
        raise InvalidStepError(f"q must be an odd step in 1..15, got {value}")
    return value


@dataclass
class Encode(CommandInterface):
    """Built-in 'encode' command."""

    name: str = "encode"
    help: str = "Encodes a raw or PGM depth sequence into a btbd stream."

    def run(self, args: argparse.Namespace) -> None:
        """Encodes a depth sequence.

        The quantisation step, search width, GOP period and worker count fall back to the encoder section of
        btbdconfig.yaml, then to lossless coding with a search width of 32 and an I-frame every 8 frames.

        Args:
            args: The arguments provided by the caller.
        """
        q = resolve_step(setting(args.q, "encoder.q", 1))
        search_width = positive(
            setting(args.search_width, "encoder.search_width", DEFAULT_SEARCH_WIDTH), "--search-width", MAX_SEARCH_WIDTH
        )
        gop = positive(setting(args.gop, "encoder.gop", DEFAULT_GOP_PERIOD), "--gop", MAX_GOP_PERIOD)
        threads = positive(setting(args.threads, "encoder.threads", 1), "--threads", MAX_THREADS)

        sequence = load_sequence(args.input, args, args.format)
        messages.header(
            f"Encoding {len(sequence)} frames of {sequence.original_width}x{sequence.original_height} "
            f"with q={q}, search width {search_width} and GOP {gop}."
        )
        stream = encode_sequence(sequence, q, search_width, gop, threads)
        files.write_bytes(args.output, stream.data)

        bpp = stream.bits / (len(sequence) * sequence.original_width * sequence.original_height)
        messages.info(f"{stream.bits} bits, {bpp:.4f} bpp, compression ratio {8 / bpp:.2f}x")
        messages.success(f"Wrote {args.output}.")

    def setup_parser(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--in", dest="input", required=True, help="The sequence to encode.")
        parser.add_argument("--out", dest="output", required=True, help="Where to write the stream.")
        add_format_argument(parser, "--format", "input")
        add_dimension_arguments(parser)
        parser.add_argument("--q", type=int, default=None, help="Odd quantisation step in 1..15, 1 is lossless.")
        parser.add_argument("--search-width", type=int, default=None, help="Motion search range, default: 32.")
        parser.add_argument("--gop", type=int, default=None, help="Distance between I-frames, default: 8.")
        parser.add_argument("--threads", type=int, default=None, help="Worker processes encoding GOPs, default: 1.")
