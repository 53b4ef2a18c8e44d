"""
The depth sequence codec: prediction, quantisation, mode decision, data maps, their binary-tree decomposition
and the stream format.
"""
from .frames import (
    load_pgm,
    load_raw,
    load_sequence_file,
    mse,
    mse_to_psnr,
    pad_frame,
    psnr,
    store_pgm,
    store_raw,
    store_sequence_file,
)
from .sequence import decode_frame, decode_sequence, encode_frame, encode_sequence
