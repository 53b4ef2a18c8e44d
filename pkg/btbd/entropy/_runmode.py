from typing import Iterable

from btbd.core.exceptions import DecodeError
from btbd.entropy._bits import BitReader, BitWriter


def run_mode_encode(sink: BitWriter, ranks: Iterable[int]) -> None:
    """Codes a scan of ranks as zero runs, each followed by the non-zero rank ending it.

    Run lengths are written as order-0 Exp-Golomb codes and the rank r that ends a run as r - 1.
    A scan ending in a non-zero rank has no trailing run token.

    Args:
        sink: The bit sink.
        ranks: The ranks in scan order, don't-care cells already removed.
    """
    run = 0
    for rank in ranks:
        if rank == 0:
            run += 1
            continue
        sink.write_ue(run)
        sink.write_ue(rank - 1)
        run = 0

    if run:
        sink.write_ue(run)


def run_mode_decode(source: BitReader, count: int, bound: int) -> list[int]:
    """Inverts `run_mode_encode` for a scan of `count` cells.

    Args:
        source: The bit source.
        count: The number of cells in the scan.
        bound: The largest valid rank.

    Raises:
        DecodeError: A run overshoots the scan or a rank exceeds `bound`.
    """
    ranks: list[int] = []
    while len(ranks) < count:
        start = source.position
        run = source.read_ue()
        if len(ranks) + run > count:
            raise DecodeError("zero run overshoots the residual map", start)
        ranks.extend([0] * run)
        if len(ranks) == count:
            break

        rank = source.read_ue() + 1
        if rank > bound:
            raise DecodeError(f"rank {rank} exceeds the signalled bound {bound}", start)
        ranks.append(rank)

    return ranks
