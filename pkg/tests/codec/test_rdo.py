from typing import Iterator

import numpy as np

from btbd.codec import rdo
from btbd.ddl.coding import CtuNode, CuSplit, FrameType, MotionVector, PredictionMode
from btbd.ddl.frames import CuRect


def _bowl(size: int, centre_row: int, centre_col: int) -> np.ndarray:
    rows, cols = np.mgrid[0:size, 0:size]
    return np.clip(((rows - centre_row) ** 2 + (cols - centre_col) ** 2) // 4, 0, 255)


def _textured(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.clip(_bowl(64, 30, 20) + rng.integers(-20, 21, (64, 64)), 0, 255)


def test_estimates() -> None:
    assert rdo.estimate_mv_bits(MotionVector(0, 0)) == 2
    assert rdo.estimate_mv_bits(MotionVector(3, -1)) == 5 + 3
    assert rdo.estimate_block_bits(np.zeros((8, 8), dtype=np.int64), 1) == 0
    assert rdo.estimate_block_bits(np.arange(64).reshape(8, 8) % 3, 1) > 0


def test_intra_frame_lossless() -> None:
    current = _textured(1)
    state = rdo.FrameState(current, None)
    tree = rdo.build_ctu_tree(CuRect(0, 0, 64), state)

    assert state.frame_type is FrameType.I
    assert all(leaf.mode is PredictionMode.INTRA for leaf in tree.leaves())
    assert np.array_equal(state.reconstruction, current)
    assert state.available.all()
    flags = len(list(_splits(tree.root))) * rdo.DIVISION_FLAG_BITS
    assert tree.bits == sum(leaf.bits for leaf in tree.leaves()) + flags


def _splits(node: CtuNode) -> Iterator[CuSplit]:
    if isinstance(node, CuSplit):
        yield node
        for child in node.children:
            yield from _splits(child)


def test_intra_frame_near_lossless() -> None:
    current = _textured(2)
    for q in (3, 5, 15):
        state = rdo.FrameState(current, None, q=q)
        tree = rdo.build_ctu_tree(CuRect(0, 0, 64), state)

        assert np.abs(state.reconstruction - current).max() <= (q - 1) // 2
        for leaf in tree.leaves():
            assert leaf.reconstruction is not None
            assert np.array_equal(state.reconstruction[leaf.rect.slices], leaf.reconstruction)
            assert leaf.ranks.max() <= -(-255 // q)


def test_static_content_is_skipped() -> None:
    current = _textured(3)
    state = rdo.FrameState(current, current.copy())
    tree = rdo.build_ctu_tree(CuRect(0, 0, 64), state)

    assert state.frame_type is FrameType.P
    assert not isinstance(tree.root, CuSplit)
    assert tree.root.mode is PredictionMode.SKIP and tree.bits == 0
    assert np.array_equal(state.reconstruction, current)


def test_moving_content_uses_motion() -> None:
    reference = _bowl(128, 90, 100)
    current = _bowl(128, 92, 102)
    state = rdo.FrameState(current, reference, search_width=8)

    decision = rdo.select_cu_mode(CuRect(64, 64, 64), state)
    assert decision.mode is PredictionMode.INTER_M
    assert decision.mv == MotionVector(2, 2)
    assert not decision.ranks.any()
    assert decision.bits == rdo.estimate_mv_bits(MotionVector(2, 2))
    assert CuRect(64, 64, 64) in state.motion
    # Selection never commits.
    assert not state.available.any()
