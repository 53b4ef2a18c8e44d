import argparse
from dataclasses import dataclass

from btbd.codec import store_sequence_file
from btbd.core import messages
from btbd.ddl.commands import CommandInterface
from btbd.synth import generate, load_scene_spec, measure_zero_proportion
from btbd.utils import files

from ._options import add_format_argument


@dataclass
class Synth(CommandInterface):
    """Built-in 'synth' command."""

    name: str = "synth"
    help: str = "Renders a synthetic depth sequence from a YAML scene spec."

    def run(self, args: argparse.Namespace) -> None:
        """Renders the scene described by --spec and writes it to --out.

        Args:
            args: The arguments provided by the caller.
        """
        sequence = generate(load_scene_spec(files.read_text(args.spec)))
        store_sequence_file(args.output, sequence, args.format)

        if len(sequence) > 1:
            messages.info(f"Zero proportion of temporal differences: {measure_zero_proportion(sequence):.4f}")
        messages.success(f"Wrote {len(sequence)} frames to {args.output}.")

    def setup_parser(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--spec", required=True, help="The YAML scene spec.")
        parser.add_argument("--out", dest="output", required=True, help="Where to write the sequence.")
        add_format_argument(parser, "--format", "output")
