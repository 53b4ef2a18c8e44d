"""
Deterministic synthetic depth sequences: constant-depth objects translating over a background, with optional
per-frame flicker noise that controls the proportion of zero temporal residuals.
"""
from ._generator import (
    MAX_VELOCITY,
    density_for_zero_proportion,
    generate,
    load_scene_spec,
    measure_zero_proportion,
    validate_scene_spec,
)
