from btbd.core.exceptions import DecodeError
from btbd.entropy._bits import BitReader, BitWriter

STATE_SIZE = 32
FREQUENCY_CAP = 1 << 13


class FrequencyTable:
    """Adaptive symbol frequencies over [0, size), backed by a Fenwick tree.

    Every count starts at one. When the total exceeds `FREQUENCY_CAP` all counts are halved, rounding up.

    Args:
        size: The alphabet size.
    """

    __slots__ = ("size", "total", "_freqs", "_tree", "_top")

    def __init__(self, size: int) -> None:
        if size < 1:
            raise ValueError("alphabet must hold at least one symbol")

        self.size = size
        self._freqs = [1] * size
        self._top = 1 << (size.bit_length() - 1)
        self._rebuild()

    def _rebuild(self) -> None:
        tree = [0] + self._freqs
        for index in range(1, self.size + 1):
            parent = index + (index & -index)
            if parent <= self.size:
                tree[parent] += tree[index]
        self._tree = tree
        self.total = sum(self._freqs)

    def frequency(self, symbol: int) -> int:
        return self._freqs[symbol]

    def low(self, symbol: int) -> int:
        """Returns the summed frequency of all symbols below `symbol`."""
        total = 0
        index = symbol
        tree = self._tree
        while index > 0:
            total += tree[index]
            index -= index & -index
        return total

    def find(self, target: int) -> int:
        """Returns the symbol whose cumulative interval contains `target`."""
        position = 0
        step = self._top
        tree = self._tree
        while step:
            candidate = position + step
            if candidate <= self.size and tree[candidate] <= target:
                position = candidate
                target -= tree[candidate]
            step >>= 1
        return position

    def increment(self, symbol: int) -> None:
        self._freqs[symbol] += 1
        self.total += 1
        if self.total > FREQUENCY_CAP:
            self._freqs = [(freq + 1) >> 1 for freq in self._freqs]
            self._rebuild()
            return

        index = symbol + 1
        tree = self._tree
        while index <= self.size:
            tree[index] += 1
            index += index & -index

    def snapshot(self) -> tuple[int, ...]:
        return tuple(self._freqs)


class AdaptiveModel:
    """A set of per-context frequency tables over one alphabet.

    Args:
        context_count: The number of contexts, 1 for context-free coding.
        alphabet_size: The number of symbols, R + 1 for an alphabet [0, R].
    """

    def __init__(self, context_count: int, alphabet_size: int) -> None:
        self.context_count = context_count
        self.alphabet_size = alphabet_size
        self.tables = [FrequencyTable(alphabet_size) for _ in range(context_count)]


class _ArithmeticCoderBase:
    """Shared interval arithmetic of the binary arithmetic coder with a `STATE_SIZE`-bit state."""

    MAX_RANGE = 1 << STATE_SIZE
    MIN_RANGE = (MAX_RANGE >> 2) + 2
    MASK = MAX_RANGE - 1
    TOP_MASK = MAX_RANGE >> 1
    SECOND_MASK = TOP_MASK >> 1

    def __init__(self) -> None:
        self.low = 0
        self.high = self.MASK

    def _update(self, table: FrequencyTable, symbol: int) -> None:
        total = table.total
        symbol_low = table.low(symbol)
        symbol_high = symbol_low + table.frequency(symbol)
        span = self.high - self.low + 1
        self.high = self.low + symbol_high * span // total - 1
        self.low = self.low + symbol_low * span // total

        while ((self.low ^ self.high) & self.TOP_MASK) == 0:
            self._shift()
            self.low = (self.low << 1) & self.MASK
            self.high = ((self.high << 1) & self.MASK) | 1

        while (self.low & ~self.high & self.SECOND_MASK) != 0:
            self._underflow()
            self.low = (self.low << 1) & (self.MASK >> 1)
            self.high = ((self.high << 1) & (self.MASK >> 1)) | self.TOP_MASK | 1

    def _shift(self) -> None:
        raise NotImplementedError

    def _underflow(self) -> None:
        raise NotImplementedError


class ArithmeticEncoder(_ArithmeticCoderBase):
    """Writes one self-delimiting arithmetic-coded segment into a bit sink.

    Args:
        output: The sink to append bits to.
    """

    def __init__(self, output: BitWriter) -> None:
        super().__init__()
        self.output = output
        self._pending = 0

    def encode(self, table: FrequencyTable, symbol: int) -> None:
        """Codes `symbol` with the current frequencies of `table`, without adapting them."""
        self._update(table, symbol)

    def encode_symbol(self, model: AdaptiveModel, context: int, symbol: int) -> None:
        """Codes `symbol` in `context` and adapts that context's frequencies."""
        table = model.tables[context]
        self.encode(table, symbol)
        table.increment(symbol)

    def finish(self) -> None:
        """Flushes the whole state so the decoder ends on exactly the last bit written here."""
        self._shift()
        self.output.write_uint(self.low & (self.TOP_MASK - 1), STATE_SIZE - 1)

    def _shift(self) -> None:
        bit = self.low >> (STATE_SIZE - 1)
        self.output.write_bit(bit)
        for _ in range(self._pending):
            self.output.write_bit(bit ^ 1)
        self._pending = 0

    def _underflow(self) -> None:
        self._pending += 1


class ArithmeticDecoder(_ArithmeticCoderBase):
    """Reads one arithmetic-coded segment written by `ArithmeticEncoder`.

    Args:
        source: The reader, positioned at the first bit of the segment.

    Raises:
        DecodeError: The segment is truncated or inconsistent.
    """

    def __init__(self, source: BitReader) -> None:
        super().__init__()
        self.source = source
        self.code = source.read_uint(STATE_SIZE)

    def decode(self, table: FrequencyTable) -> int:
        """Decodes one symbol with the current frequencies of `table`, without adapting them."""
        offset = self.code - self.low
        span = self.high - self.low + 1
        if not 0 <= offset < span:
            raise DecodeError("arithmetic decoder lost synchronisation", self.source.position)

        value = ((offset + 1) * table.total - 1) // span
        symbol = table.find(value)
        if symbol >= table.size:
            raise DecodeError("arithmetic decoder lost synchronisation", self.source.position)

        self._update(table, symbol)
        return symbol

    def decode_symbol(self, model: AdaptiveModel, context: int) -> int:
        """Decodes one symbol in `context` and adapts that context's frequencies."""
        table = model.tables[context]
        symbol = self.decode(table)
        table.increment(symbol)
        return symbol

    def _shift(self) -> None:
        self.code = ((self.code << 1) & self.MASK) | self.source.read_bit()

    def _underflow(self) -> None:
        self.code = (self.code & self.TOP_MASK) | ((self.code << 1) & (self.MASK >> 1)) | self.source.read_bit()
