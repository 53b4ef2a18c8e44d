"""
The "commands" module contains all default commands for btbd. The commands are a full internal API:
every command only parses its flags and calls into btbd.codec, btbd.analysis or btbd.synth.
"""
from ._bd import Bd
from ._decode import Decode
from ._encode import Encode
from ._help import Help
from ._stats import Stats
from ._synth import Synth
