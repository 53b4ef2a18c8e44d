import struct
from dataclasses import dataclass, field
from enum import IntEnum

from btbd.ddl.coding import FrameType
from btbd.ddl.frames import DepthFrame, Sequence
from btbd.ddl.maps import MapKind

MAGIC = b"BTBD"
STREAM_VERSION = 1
HEADER_FORMAT = ">4sBHHHHIBBB"
HEADER_SIZE = struct.calcsize(HEADER_FORMAT)


class MapCodingMode(IntEnum):
    """Map coding modes, valued by their stream code.

    PC: partitioned, context-adaptive. PC_BAR: partitioned, context-free.
    P_BAR_C: unpartitioned, context-adaptive. P_BAR_C_BAR: unpartitioned, context-free.
    RUN: run mode, residual maps only.
    """

    PC = 0
    PC_BAR = 1
    P_BAR_C = 2
    P_BAR_C_BAR = 3
    RUN = 4

    @property
    def partitioned(self) -> bool:
        return self in (MapCodingMode.PC, MapCodingMode.PC_BAR)

    @property
    def adaptive(self) -> bool:
        return self in (MapCodingMode.PC, MapCodingMode.P_BAR_C)


class MvCodingMode(IntEnum):
    """MV coding modes, valued by their stream code.

    PG: median prediction with signed Exp-Golomb. PA: median prediction with arithmetic coding.
    P_BAR_G: modified Exp-Golomb without prediction. P_BAR_A: arithmetic coding without prediction.
    """

    PG = 0
    PA = 1
    P_BAR_G = 2
    P_BAR_A = 3


@dataclass(frozen=True)
class StreamHeader:
    magic: bytes
    version: int
    width: int
    height: int
    original_width: int
    original_height: int
    frame_count: int
    q: int
    search_width: int
    gop_period: int

    def pack(self) -> bytes:
        return struct.pack(
            HEADER_FORMAT,
            self.magic,
            self.version,
            self.width,
            self.height,
            self.original_width,
            self.original_height,
            self.frame_count,
            self.q,
            self.search_width,
            self.gop_period,
        )

    @classmethod
    def unpack(cls, data: bytes) -> "StreamHeader":
        """Parses the fixed-size header at the start of `data`, without validating field values.

        Raises:
            struct.error: `data` is shorter than a header.
        """
        return cls(*struct.unpack_from(HEADER_FORMAT, data))

    def frame_type(self, index: int) -> FrameType:
        return FrameType.I if index % self.gop_period == 0 else FrameType.P


@dataclass(frozen=True)
class MapCodingReport:
    """How one data map was coded.

    Attributes:
        kind: The map.
        mode: The selected coding mode.
        bits: Total bits written for the map, signalling included.
        candidates: Payload bits of every eligible mode that was tried, empty at the decoder.
    """

    kind: MapKind
    mode: MapCodingMode
    bits: int
    candidates: dict[MapCodingMode, int] = field(default_factory=dict)


@dataclass(frozen=True)
class MvCodingReport:
    mode: MvCodingMode
    bits: int
    components: int
    candidates: dict[MvCodingMode, int] = field(default_factory=dict)


@dataclass(frozen=True)
class FrameReport:
    """Per-frame accounting shared by encoder and decoder.

    Attributes:
        index: The frame number.
        frame_type: I or P.
        bits: The byte-aligned size of the frame payload in bits.
        maps: Coding reports per map, in stream order.
        mvs: The MV payload report, None when the frame has no InterM CU.
        zero_ranks: Coded residual cells whose rank is zero.
        coded_ranks: Coded (non-don't-care) residual cells.
        max_rank: The largest coded rank.
    """

    index: int
    frame_type: FrameType
    bits: int
    maps: tuple[MapCodingReport, ...]
    mvs: MvCodingReport | None
    zero_ranks: int
    coded_ranks: int
    max_rank: int


@dataclass(frozen=True)
class CodedStream:
    """An encoded sequence.

    Attributes:
        header: The stream header.
        data: The complete serialized stream, header included.
        reports: Per-frame coding reports.
        reconstructions: The encoder-side reconstruction of every frame.
    """

    header: StreamHeader
    data: bytes
    reports: tuple[FrameReport, ...]
    reconstructions: tuple[DepthFrame, ...]

    @property
    def bits(self) -> int:
        return len(self.data) * 8


@dataclass(frozen=True)
class DecodedStream:
    header: StreamHeader
    sequence: Sequence
    reports: tuple[FrameReport, ...]
