import pytest

from btbd.core.exceptions import DecodeError
from btbd.entropy import BitReader, BitWriter, run_mode_decode, run_mode_encode


def test_run_mode_round_trip() -> None:
    for ranks in ([0, 0, 0, 2, 0, 1, 0, 0], [3, 1, 0, 0, 0, 0, 4], [0] * 40, [1]):
        sink = BitWriter()
        run_mode_encode(sink, ranks)
        source = BitReader(sink.getvalue())
        assert run_mode_decode(source, len(ranks), max(1, max(ranks))) == ranks
        assert source.position == len(sink)


def test_run_mode_layout() -> None:
    sink = BitWriter()
    run_mode_encode(sink, [0, 0, 1, 0])
    # ue(2) "011", ue(0) "1" for rank 1, trailing ue(1) "010"
    assert len(sink) == 3 + 1 + 3


def test_run_mode_rejects_overshoot() -> None:
    sink = BitWriter()
    sink.write_ue(5)
    with pytest.raises(DecodeError):
        run_mode_decode(BitReader(sink.getvalue()), 3, 1)


def test_run_mode_rejects_rank_above_bound() -> None:
    sink = BitWriter()
    run_mode_encode(sink, [0, 5])
    with pytest.raises(DecodeError):
        run_mode_decode(BitReader(sink.getvalue()), 2, 4)
