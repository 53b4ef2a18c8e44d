"""
The Data Definition Layer (ddl for short) contains dataclasses, enums and abstract base classes shared by btbd.
You are free to import these into your own projects, for example to inspect coding reports.

We prefer importing like this, because it adheres to the other btbd importing:
>>> from btbd.ddl import stream as stream_models
>>> # Alternatively, on a per-model basis:
>>> from btbd.ddl.frames import DepthFrame, Sequence
"""
from btbd.ddl import analysis
from btbd.ddl import coding
from btbd.ddl import commands
from btbd.ddl import frames
from btbd.ddl import maps
from btbd.ddl import partition
from btbd.ddl import stream
from btbd.ddl import synth
