import numpy as np

from btbd.core.exceptions import DecodeError

# Longest Exp-Golomb prefix a valid stream can contain; anything longer is corruption.
_MAX_PREFIX_ZEROS = 32


def exp_golomb_length(value: int) -> int:
    """Returns the length in bits of the order-0 unsigned Exp-Golomb code of `value` (value >= 0)."""
    return ((value + 1).bit_length() - 1) * 2 + 1


def signed_to_unsigned(value: int) -> int:
    """Maps v > 0 to 2v - 1 and v <= 0 to -2v."""
    return 2 * value - 1 if value > 0 else -2 * value


def unsigned_to_signed(code: int) -> int:
    half, odd = code >> 1, code & 1
    return half + 1 if odd else -half


class BitWriter:
    """An append-only, MSB-first bit sink.

    Bits are kept unpacked until `getvalue`, so payloads can be assembled in scratch writers and spliced.
    """

    __slots__ = ("_bits",)

    def __init__(self) -> None:
        self._bits: list[int] = []

    def __len__(self) -> int:
        return len(self._bits)

    def write_bit(self, bit: int) -> None:
        self._bits.append(bit & 1)

    def write_uint(self, value: int, bits: int) -> None:
        """Writes `value` as a fixed-width unsigned integer of `bits` bits."""
        for shift in range(bits - 1, -1, -1):
            self._bits.append((value >> shift) & 1)

    def write_code(self, code: str) -> None:
        """Writes a code word given as a string of '0' and '1' characters."""
        self._bits.extend(1 if char == "1" else 0 for char in code)

    def write_ue(self, value: int) -> None:
        """Writes an order-0 unsigned Exp-Golomb code."""
        self.write_uint(value + 1, exp_golomb_length(value))

    def write_se(self, value: int) -> None:
        """Writes an order-0 signed Exp-Golomb code."""
        self.write_ue(signed_to_unsigned(value))

    def extend(self, other: "BitWriter") -> None:
        self._bits.extend(other._bits)

    def align(self) -> None:
        """Pads with zero bits up to the next byte boundary."""
        self._bits.extend([0] * (-len(self._bits) % 8))

    def getvalue(self) -> bytes:
        """Returns the written bits packed into bytes, zero-padded to a whole byte."""
        return np.packbits(np.asarray(self._bits, dtype=np.uint8)).tobytes()


class BitReader:
    """An MSB-first bit source over a byte buffer.

    Args:
        data: The buffer to read from.
        offset: The bit position to start reading at.

    Raises:
        DecodeError: On any read past the end of the buffer.
    """

    __slots__ = ("_bits", "position")

    def __init__(self, data: bytes, offset: int = 0) -> None:
        self._bits: list[int] = np.unpackbits(np.frombuffer(data, dtype=np.uint8)).tolist()
        self.position = offset

    def __len__(self) -> int:
        return len(self._bits)

    @property
    def remaining(self) -> int:
        return len(self._bits) - self.position

    def read_bit(self) -> int:
        if self.position >= len(self._bits):
            raise DecodeError("unexpected end of data", self.position)

        bit = self._bits[self.position]
        self.position += 1
        return bit

    def read_uint(self, bits: int) -> int:
        if self.position + bits > len(self._bits):
            raise DecodeError("unexpected end of data", self.position)

        value = 0
        for bit in self._bits[self.position : self.position + bits]:
            value = (value << 1) | bit
        self.position += bits
        return value

    def read_ue(self) -> int:
        start = self.position
        zeros = 0
        while self.read_bit() == 0:
            zeros += 1
            if zeros > _MAX_PREFIX_ZEROS:
                raise DecodeError("Exp-Golomb prefix too long", start)

        return ((1 << zeros) | self.read_uint(zeros)) - 1

    def read_se(self) -> int:
        return unsigned_to_signed(self.read_ue())

    def align(self) -> None:
        """Skips to the next byte boundary."""
        self.position += -self.position % 8
