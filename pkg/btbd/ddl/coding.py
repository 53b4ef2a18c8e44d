from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterator, Union

import numpy as np

from btbd.ddl.frames import CuRect


class PredictionMode(IntEnum):
    """Prediction modes of a leaf CU, valued by their mode-map code words."""

    INTRA = 0
    SKIP = 1
    INTER_Z = 2
    INTER_M = 3


class FrameType(IntEnum):
    """Frame types, valued by their 1-bit stream code."""

    I = 0  # pylint: disable=invalid-name
    P = 1  # pylint: disable=invalid-name


@dataclass(frozen=True, order=True)
class MotionVector:
    """Full-pel displacement of content from the reference frame to the current frame.

    Attributes:
        x: Horizontal component, positive to the right.
        y: Vertical component, positive downwards.
    """

    x: int = 0
    y: int = 0

    @property
    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    @property
    def components(self) -> tuple[int, int]:
        return self.x, self.y


ZERO_MV = MotionVector(0, 0)


@dataclass(frozen=True)
class ResidualBlock:
    """Signed prediction residuals of one CU.

    Attributes:
        rect: The CU the residuals belong to.
        values: An m×m grid of signed integers in [-255, 255].
    """

    rect: CuRect
    values: np.ndarray


@dataclass(frozen=True)
class CuDecision:
    """The outcome of mode selection for one leaf CU.

    Attributes:
        rect: The leaf CU.
        mode: The chosen prediction mode.
        mv: The motion vector, zero unless the mode is InterM.
        ranks: The m×m grid of quantised-residual ranks, all zero for Skip.
        bits: The estimated code length of the residual (and MV) payload.
        reconstruction: The m×m reconstructed samples this decision produces.
    """

    rect: CuRect
    mode: PredictionMode
    mv: MotionVector
    ranks: np.ndarray
    bits: int
    reconstruction: np.ndarray | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CuSplit:
    """An internal quad-tree node, its children listed in coding order."""

    rect: CuRect
    children: tuple["CtuNode", "CtuNode", "CtuNode", "CtuNode"]


CtuNode = Union[CuDecision, CuSplit]


@dataclass(frozen=True)
class CtuDecisionTree:
    """The division and mode decisions of one 64×64 coding tree unit.

    Attributes:
        root: The root node, a leaf when the CTU is coded undivided.
        bits: The estimated cost of the tree including one bit per division flag.
    """

    root: CtuNode
    bits: int = field(default=0)

    @property
    def rect(self) -> CuRect:
        return self.root.rect

    def leaves(self) -> Iterator[CuDecision]:
        """Yields the leaf CUs in coding order."""
        stack: list[CtuNode] = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, CuSplit):
                stack.extend(reversed(node.children))
            else:
                yield node

    def is_split(self, rect: CuRect) -> bool | None:
        """Tells whether the node covering exactly `rect` is divided.

        Returns:
            True or False for nodes present in the tree, None when an ancestor of `rect` is a leaf.
        """
        node = self.root
        while node.rect != rect:
            if not isinstance(node, CuSplit):
                return None
            half = node.rect.size // 2
            index = (2 if rect.row >= node.rect.row + half else 0) + (1 if rect.col >= node.rect.col + half else 0)
            node = node.children[index]

        return isinstance(node, CuSplit)


@dataclass(frozen=True)
class QuantConfig:
    """Quantisation step Q = 2D + 1 bounding the per-sample error by D.

    Attributes:
        q: The odd quantisation step.
    """

    q: int = 1

    @property
    def d(self) -> int:
        return (self.q - 1) // 2

    @property
    def r_max(self) -> int:
        """The largest rank of a quantised residual: ceil(255 / Q)."""
        return -(-255 // self.q)
