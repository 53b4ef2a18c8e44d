from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np


class MapClass(Enum):
    BITMAP = "bitmap"
    INTMAP = "intmap"


class ContextModelKind(Enum):
    NOMINAL_2D_BIT = "nominal_2d_bit"
    NOMINAL_3D_BIT = "nominal_3d_bit"
    NOMINAL_INT4 = "nominal_int4"
    ORDINAL_RESIDUAL = "ordinal_residual"

    @property
    def context_count(self) -> int:
        return {"nominal_2d_bit": 4, "nominal_3d_bit": 8, "nominal_int4": 16, "ordinal_residual": 4}[self.value]


class MapKind(IntEnum):
    """The six frame-level data maps, valued by their position in the stream."""

    DIV64 = 0
    DIV32 = 1
    DIV16 = 2
    MODE = 3
    MVZ = 4
    RESIDUAL = 5

    @property
    def map_class(self) -> MapClass:
        return MapClass.INTMAP if self in (MapKind.MODE, MapKind.RESIDUAL) else MapClass.BITMAP

    @property
    def context_model(self) -> ContextModelKind:
        if self is MapKind.MVZ:
            return ContextModelKind.NOMINAL_3D_BIT
        if self is MapKind.MODE:
            return ContextModelKind.NOMINAL_INT4
        if self is MapKind.RESIDUAL:
            return ContextModelKind.ORDINAL_RESIDUAL
        return ContextModelKind.NOMINAL_2D_BIT

    @property
    def dimensions(self) -> int:
        return 3 if self is MapKind.MVZ else 2


@dataclass(frozen=True)
class DataMap:
    """A frame-level grid of symbols over [0, R] with don't-care cells.

    Symbols are always stored as a 3D array indexed (p, y, x); two-dimensional maps have a single plane.

    Attributes:
        kind: Which of the six maps this is.
        symbols: The symbol grid, meaningful where `dontcare` is False.
        dontcare: True for cells the decoder can infer from earlier maps.
        alphabet_bound: R, the largest symbol value the coder has to represent.
        step: The quantisation step of residual maps, 1 for every other map.
        cover: For mode maps, the flat index of the cell holding the code word of the leaf CU covering each cell.
    """

    kind: MapKind
    symbols: np.ndarray
    dontcare: np.ndarray
    alphabet_bound: int
    step: int = 1
    cover: np.ndarray | None = None

    @property
    def shape(self) -> tuple[int, int, int]:
        planes, rows, cols = self.symbols.shape
        return int(planes), int(rows), int(cols)

    @property
    def map_class(self) -> MapClass:
        return self.kind.map_class

    @property
    def is_bitmap(self) -> bool:
        return self.kind.map_class is MapClass.BITMAP

    @property
    def codable(self) -> int:
        """The number of cells that carry information."""
        return int(np.count_nonzero(~self.dontcare))


@dataclass(frozen=True)
class FrameMaps:
    """The data maps of one frame plus the never-transmitted significance map.

    Attributes:
        div64: Division flags of the CTUs.
        div32: Division flags of 32×32 CUs.
        div16: Division flags of 16×16 CUs.
        mode: Prediction mode code words at the top-left 8×8 cell of every leaf CU.
        mvz: Non-zero flags of both MV components of every InterM CU, x plane first.
        residual: Quantised-residual ranks of every sample outside Skip CUs.
        significance: 0 at the top-left 8×8 cell of every leaf CU, 1 elsewhere, shape (H/8, W/8).
    """

    div64: DataMap
    div32: DataMap
    div16: DataMap
    mode: DataMap
    mvz: DataMap
    residual: DataMap
    significance: np.ndarray

    def in_stream_order(self, with_mvz: bool = True) -> tuple[DataMap, ...]:
        """The maps in the order they are coded; I-frames leave out the mvz map."""
        maps = (self.div64, self.div32, self.div16, self.mode, self.mvz, self.residual)
        return maps if with_mvz else tuple(datamap for datamap in maps if datamap.kind is not MapKind.MVZ)
