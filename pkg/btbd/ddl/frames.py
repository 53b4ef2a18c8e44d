from dataclasses import dataclass

import numpy as np

CTU_SIZE = 64
CU_SIZES = (64, 32, 16, 8)
MAX_SAMPLE = 255


@dataclass(frozen=True)
class DepthFrame:
    """A single 8-bit depth frame, padded to whole coding tree units.

    Attributes:
        samples: Row-major grid of depth samples, shape (height, width), padded dimensions.
        original_width: The width before padding.
        original_height: The height before padding.
    """

    samples: np.ndarray
    original_width: int
    original_height: int

    @property
    def width(self) -> int:
        return int(self.samples.shape[1])

    @property
    def height(self) -> int:
        return int(self.samples.shape[0])

    @property
    def cropped(self) -> np.ndarray:
        """The samples of the original, unpadded region."""
        return self.samples[: self.original_height, : self.original_width]


@dataclass(frozen=True)
class CuRect:
    """A square coding unit inside a frame.

    Attributes:
        row: The top pixel row.
        col: The left pixel column.
        size: The edge length in pixels, one of 64, 32, 16 or 8.
    """

    row: int
    col: int
    size: int

    @property
    def slices(self) -> tuple[slice, slice]:
        return slice(self.row, self.row + self.size), slice(self.col, self.col + self.size)

    @property
    def grid_cell(self) -> tuple[int, int]:
        """The top-left cell of this CU in the 8×8 grid."""
        return self.row // 8, self.col // 8

    @property
    def grid_size(self) -> int:
        """The edge length of this CU in 8×8 grid cells."""
        return self.size // 8

    def quadrants(self) -> tuple["CuRect", "CuRect", "CuRect", "CuRect"]:
        """Splits into four children in coding (z-) order: top-left, top-right, bottom-left, bottom-right."""
        half = self.size // 2
        return (
            CuRect(self.row, self.col, half),
            CuRect(self.row, self.col + half, half),
            CuRect(self.row + half, self.col, half),
            CuRect(self.row + half, self.col + half, half),
        )


@dataclass(frozen=True)
class Sequence:
    """An ordered list of equally sized depth frames.

    Attributes:
        frames: The frames in display order.
        frame_rate: Informational frame rate in Hz.
    """

    frames: tuple[DepthFrame, ...]
    frame_rate: float = 30.0

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def original_width(self) -> int:
        return self.frames[0].original_width

    @property
    def original_height(self) -> int:
        return self.frames[0].original_height
