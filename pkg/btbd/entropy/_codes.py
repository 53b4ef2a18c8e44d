from enum import Enum

from btbd.core.exceptions import DecodeError, InputError
from btbd.ddl.maps import MapClass
from btbd.entropy._bits import BitReader, BitWriter, exp_golomb_length, signed_to_unsigned


class NodeKind(Enum):
    """Partition-tree node kinds as they appear in the pre-order tree code."""

    LEAF_I = "I"
    LEAF_II = "II"
    LEAF_III = "III"
    SPLIT_X = "X"
    SPLIT_Y = "Y"
    SPLIT_P = "P"


TREE_CODES: dict[MapClass, dict[NodeKind, str]] = {
    MapClass.BITMAP: {
        NodeKind.LEAF_I: "00",
        NodeKind.LEAF_II: "1000",
        NodeKind.LEAF_III: "101",
        NodeKind.SPLIT_X: "11",
        NodeKind.SPLIT_Y: "01",
        NodeKind.SPLIT_P: "1001",
    },
    MapClass.INTMAP: {
        NodeKind.LEAF_I: "001",
        NodeKind.LEAF_II: "000",
        NodeKind.LEAF_III: "01",
        NodeKind.SPLIT_X: "11",
        NodeKind.SPLIT_Y: "10",
    },
}

_TREE_DECODING: dict[MapClass, dict[str, NodeKind]] = {
    map_class: {code: kind for kind, code in codes.items()} for map_class, codes in TREE_CODES.items()
}


def tree_node_code(kind: NodeKind, map_class: MapClass) -> str:
    """Looks up the Huffman code word of a partition-tree node.

    Args:
        kind: The node kind.
        map_class: Whether the tree partitions a bitmap or an intmap.

    Raises:
        InputError: P-splits do not exist for intmaps.

    Returns:
        The code word as a string of '0' and '1' characters.
    """
    codes = TREE_CODES[map_class]
    if kind not in codes:
        raise InputError(f"{kind.value}-nodes are not defined for {map_class.value}s")

    return codes[kind]


def read_tree_node(source: BitReader, map_class: MapClass) -> NodeKind:
    """Reads one partition-tree node code word."""
    start = source.position
    codes = _TREE_DECODING[map_class]
    word = ""
    while len(word) < 4:
        word += str(source.read_bit())
        if word in codes:
            return codes[word]

    raise DecodeError(f"invalid {map_class.value} tree code {word}", start)


def eg_signed_length(value: int) -> int:
    return exp_golomb_length(signed_to_unsigned(value))


def eg_signed_encode(sink: BitWriter, value: int) -> None:
    sink.write_se(value)


def eg_signed_decode(source: BitReader) -> int:
    return source.read_se()


def majority_sign(values: list[int]) -> int:
    """Returns +1 when at least half of the values are positive, else -1."""
    positives = sum(1 for value in values if value > 0)
    return 1 if 2 * positives >= len(values) else -1


def eg_modified_encode(sink: BitWriter, values: list[int], majority: int) -> None:
    """Writes the majority-sign flag followed by the modified Exp-Golomb code of every value.

    Values of the majority sign move one step towards zero before signed Exp-Golomb coding, since a
    non-zero value can never be coded as 0.

    Args:
        sink: The bit sink.
        values: Non-zero values.
        majority: +1 or -1.

    Raises:
        InputError: A value is zero.
    """
    sink.write_bit(0 if majority > 0 else 1)
    for value in values:
        if value == 0:
            raise InputError("modified Exp-Golomb codes cannot represent zero")
        sink.write_se(value - majority if (value > 0) == (majority > 0) else value)


def eg_modified_decode(source: BitReader, count: int) -> tuple[list[int], int]:
    """Reads a majority-sign flag and `count` modified Exp-Golomb values.

    Returns:
        The decoded non-zero values and the majority sign.
    """
    majority = -1 if source.read_bit() else 1
    values = []
    for _ in range(count):
        shifted = source.read_se()
        if shifted == 0 or (shifted > 0) == (majority > 0):
            shifted += majority
        values.append(shifted)

    return values, majority
