"""
Bit-level coders: MSB-first bit I/O, the adaptive binary arithmetic coder, partition-tree Huffman codes,
signed and modified Exp-Golomb codes and the residual run mode.
"""
from ._bits import BitReader, BitWriter, exp_golomb_length
from ._arithmetic import AdaptiveModel, ArithmeticDecoder, ArithmeticEncoder, FrequencyTable
from ._codes import (
    NodeKind,
    TREE_CODES,
    eg_modified_decode,
    eg_modified_encode,
    eg_signed_decode,
    eg_signed_encode,
    eg_signed_length,
    majority_sign,
    read_tree_node,
    tree_node_code,
)
from ._runmode import run_mode_decode, run_mode_encode
