"""
btbd: lossless and near-lossless coding of depth map sequences with binary-tree-based decomposition of
frame-level data maps.

IMPORTANT
This core module is private. The codec itself lives in btbd.codec, the console front end in btbd.app.
"""
from btbd.core import messages
from btbd.core.exceptions import BtbdException
from btbd.core.commands import CommandManager
