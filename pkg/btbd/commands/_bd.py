import argparse
from dataclasses import dataclass

from btbd.analysis import bd_metrics, read_rd_csv
from btbd.core import messages
from btbd.ddl.commands import CommandInterface


@dataclass
class Bd(CommandInterface):
    """Built-in 'bd' command."""

    name: str = "bd"
    help: str = "Computes BD-BR and BD-PSNR of curve B against curve A."

    def run(self, args: argparse.Namespace) -> None:
        """Computes the Bjøntegaard deltas of two rate-distortion curves.

        Both files are CSV with the header `bpp,psnr` and at least four points. A negative BD-BR means curve B
        needs fewer bits for the same quality.

        Args:
            args: The arguments provided by the caller.
        """
        metrics = bd_metrics(read_rd_csv(args.curve_a), read_rd_csv(args.curve_b))
        table = [["BD-BR (%)", f"{metrics.bd_br:.2f}"], ["BD-PSNR (dB)", f"{metrics.bd_psnr:.3f}"]]
        messages.table(table)

    def setup_parser(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--curve-a", required=True, help="The anchor curve.")
        parser.add_argument("--curve-b", required=True, help="The tested curve.")
