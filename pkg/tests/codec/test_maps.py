import numpy as np
import pytest

from btbd.codec import maps
from btbd.core.exceptions import CodecInvariantError
from btbd.ddl.coding import ZERO_MV, CtuDecisionTree, CuDecision, CuSplit, MotionVector, PredictionMode
from btbd.ddl.frames import CuRect


def _leaf(rect: CuRect, mode: PredictionMode, mv: MotionVector = ZERO_MV, rank: int = 0) -> CuDecision:
    return CuDecision(rect, mode, mv, np.full((rect.size, rect.size), rank, dtype=np.int64), 0)


def _trees(skip_rank: int = 0, moving: MotionVector = MotionVector(3, 0)) -> list[CtuDecisionTree]:
    first = CtuDecisionTree(_leaf(CuRect(0, 0, 64), PredictionMode.INTRA, rank=2))

    eights = tuple(_leaf(rect, PredictionMode.INTER_Z, rank=1) for rect in CuRect(64, 0, 16).quadrants())
    sixteens = CuRect(64, 0, 32).quadrants()
    thirty_two = CuSplit(
        CuRect(64, 0, 32),
        (
            CuSplit(sixteens[0], eights),  # type: ignore[arg-type]
            _leaf(sixteens[1], PredictionMode.SKIP, rank=skip_rank),
            _leaf(sixteens[2], PredictionMode.INTER_M, moving),
            _leaf(sixteens[3], PredictionMode.INTRA),
        ),
    )
    quadrants = CuRect(64, 0, 64).quadrants()
    second = CtuDecisionTree(
        CuSplit(
            CuRect(64, 0, 64),
            (
                thirty_two,
                _leaf(quadrants[1], PredictionMode.SKIP),
                _leaf(quadrants[2], PredictionMode.INTER_M, MotionVector(0, -2)),
                _leaf(quadrants[3], PredictionMode.INTRA, rank=5),
            ),
        )
    )
    return [first, second]


def test_form_maps() -> None:
    frame_maps = maps.form_maps(_trees(), (128, 64), q=1)

    assert frame_maps.div64.symbols.tolist() == [[[0], [1]]]
    assert frame_maps.div32.dontcare[0].tolist() == [[True, True], [True, True], [False, False], [False, False]]
    assert frame_maps.div32.symbols[0, 2:].tolist() == [[1, 0], [0, 0]]
    assert frame_maps.div16.symbols[0, 4:6, 0:2].tolist() == [[1, 0], [0, 0]]
    assert frame_maps.div16.dontcare[0].sum() == 8 * 4 - 4

    significance = frame_maps.significance
    assert significance.shape == (16, 8)
    assert significance[0, 0] == 0 and significance[0, 1] == 1
    assert significance[8:10, 0:2].tolist() == [[0, 0], [0, 0]]
    assert int((significance == 0).sum()) == 1 + 4 + 3 + 3

    mode = frame_maps.mode
    assert mode.symbols[0, 10, 0] == PredictionMode.INTER_M
    assert mode.symbols[0, 12, 0] == PredictionMode.INTER_M
    assert not mode.dontcare[0, 12, 0] and mode.dontcare[0, 12, 1]
    assert mode.cover is not None and mode.cover[0, 15, 3] == 12 * 8

    mvz = frame_maps.mvz
    assert mvz.codable == 4
    assert mvz.symbols[:, 10, 0].tolist() == [1, 0]
    assert mvz.symbols[:, 12, 0].tolist() == [0, 1]

    residual = frame_maps.residual
    assert residual.dontcare[0, 64:80, 16:32].all()
    assert residual.dontcare[0, 64:96, 32:64].all()
    assert residual.codable == 128 * 64 - 16 * 16 - 32 * 32
    assert residual.alphabet_bound == 5
    assert residual.symbols[0, 0, 0] == 2


def test_maps_rebuild_geometry() -> None:
    frame_maps = maps.form_maps(_trees(), (128, 64))
    rects = maps.leaf_rects(frame_maps.div64, frame_maps.div32, frame_maps.div16)

    decisions = [leaf.rect for tree in _trees() for leaf in tree.leaves()]
    assert rects == decisions
    assert np.array_equal(maps.significance_map(rects, (16, 8)), frame_maps.significance)
    assert np.array_equal(maps.mvz_dontcare(frame_maps.mode, frame_maps.significance), frame_maps.mvz.dontcare)
    assert np.array_equal(
        maps.residual_dontcare(rects, frame_maps.mode, (128, 64)), frame_maps.residual.dontcare
    )


def test_form_maps_rejects_inconsistent_decisions() -> None:
    with pytest.raises(CodecInvariantError):
        maps.form_maps(_trees(skip_rank=1), (128, 64))
    with pytest.raises(CodecInvariantError):
        maps.form_maps(_trees(moving=ZERO_MV), (128, 64))
    with pytest.raises(CodecInvariantError):
        maps.form_maps(list(reversed(_trees())), (128, 64))
