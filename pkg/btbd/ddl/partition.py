from dataclasses import dataclass
from enum import Enum
from typing import Union


class SplitAxis(Enum):
    """Split axes, valued by the array axis of a (p, y, x) symbol grid they cut."""

    X = 2
    Y = 1
    P = 0


# Candidate evaluation order, which is also the tie-break order.
SPLIT_AXES = (SplitAxis.X, SplitAxis.Y, SplitAxis.P)


class LeafType(Enum):
    I = "I"  # pylint: disable=invalid-name
    II = "II"  # pylint: disable=invalid-name
    III = "III"  # pylint: disable=invalid-name


@dataclass(frozen=True)
class Region:
    """A cuboid of map cells, half-open bounds per (p, y, x) axis."""

    start: tuple[int, int, int]
    stop: tuple[int, int, int]

    @classmethod
    def of_shape(cls, shape: tuple[int, int, int]) -> "Region":
        return cls((0, 0, 0), shape)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (
            self.stop[0] - self.start[0],
            self.stop[1] - self.start[1],
            self.stop[2] - self.start[2],
        )

    @property
    def size(self) -> int:
        planes, rows, cols = self.shape
        return planes * rows * cols

    @property
    def slices(self) -> tuple[slice, slice, slice]:
        return (
            slice(self.start[0], self.stop[0]),
            slice(self.start[1], self.stop[1]),
            slice(self.start[2], self.stop[2]),
        )

    def extent(self, axis: SplitAxis) -> int:
        return self.shape[axis.value]

    def split(self, axis: SplitAxis, position: int) -> tuple["Region", "Region"]:
        """Cuts the region `position` cells after its start along `axis`; the first half has the lower coordinates."""
        cut = self.start[axis.value] + position
        first_stop = list(self.stop)
        first_stop[axis.value] = cut
        second_start = list(self.start)
        second_start[axis.value] = cut
        return (
            Region(self.start, (first_stop[0], first_stop[1], first_stop[2])),
            Region((second_start[0], second_start[1], second_start[2]), self.stop),
        )


@dataclass(frozen=True)
class Leaf:
    """A homogeneous or mixed cuboid that is coded as one unit.

    Attributes:
        leaf_type: Type I (all zero), II (one same non-zero value) or III (mixed).
        region: The covered cells.
        value: The shared value of Type I and II leaves, 0 for Type III.
        cost: The estimated code length of the leaf contents.
    """

    leaf_type: LeafType
    region: Region
    value: int = 0
    cost: int = 0


@dataclass(frozen=True)
class Split:
    """An accepted axis-orthogonal cut of a region.

    Attributes:
        axis: The cut axis.
        position: The number of cells of the first child along `axis`.
        region: The region that was cut.
        first: The child with the lower coordinates.
        second: The child with the higher coordinates.
        estimate: The flat code length estimate of the whole region, which the split had to beat.
        cost: The realized cost: both children's realized costs plus the split signalling.
    """

    axis: SplitAxis
    position: int
    region: Region
    first: "PartitionTree"
    second: "PartitionTree"
    estimate: int
    cost: int


PartitionTree = Union[Leaf, Split]


@dataclass(frozen=True)
class SplitCandidate:
    """The cheapest split of a region, judged by the flat estimates of both halves."""

    axis: SplitAxis
    position: int
    bits: int


@dataclass(frozen=True)
class PartitionStatistics:
    """Structural statistics of a partition tree.

    Attributes:
        leaf_types: Number of leaves per leaf type.
        split_axes: Number of internal nodes per split axis.
        leaf_dimensions: Number of leaves per count of axes with an extent above one (0 to 3).
        max_cells: The largest number of cells in one leaf.
        mean_cells: The average number of cells per leaf.
    """

    leaf_types: dict[LeafType, int]
    split_axes: dict[SplitAxis, int]
    leaf_dimensions: dict[int, int]
    max_cells: int
    mean_cells: float

    @property
    def leaves(self) -> int:
        return sum(self.leaf_types.values())

    @property
    def splits(self) -> int:
        return sum(self.split_axes.values())
