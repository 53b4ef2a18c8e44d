import math
from typing import Any

import numpy as np
import yaml

from btbd.codec.frames import pad_frame
from btbd.core import messages
from btbd.core.exceptions import InputError
from btbd.ddl.frames import MAX_SAMPLE, Sequence
from btbd.ddl.synth import SceneObject, SceneSpec, Shape

MAX_VELOCITY = 32

_SCENE_KEYS = {"width", "height", "frames", "background", "objects", "noise_amplitude", "noise_density", "seed"}
_OBJECT_KEYS = {"shape", "depth", "row", "col", "height", "width", "velocity"}


def _integer(owner: str, key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{owner}: '{key}' must be an integer, got {value!r}")
    return value


def _check_keys(owner: str, mapping: Any, allowed: set[str], required: set[str]) -> dict[str, Any]:
    if not isinstance(mapping, dict):
        raise InputError(f"{owner} must be a mapping")
    unknown = set(mapping) - allowed
    if unknown:
        raise InputError(f"{owner}: unknown keys {', '.join(sorted(map(str, unknown)))}")
    missing = required - set(mapping)
    if missing:
        raise InputError(f"{owner}: missing keys {', '.join(sorted(missing))}")
    return mapping


def _load_object(index: int, entry: Any) -> SceneObject:
    owner = f"object {index}"
    entry = _check_keys(owner, entry, _OBJECT_KEYS, _OBJECT_KEYS - {"velocity"})
    try:
        shape = Shape(entry["shape"])
    except ValueError as err:
        raise InputError(f"{owner}: unknown shape {entry['shape']!r}") from err

    velocity = entry.get("velocity", [0, 0])
    if not isinstance(velocity, list) or len(velocity) != 2:
        raise InputError(f"{owner}: 'velocity' must be a list [dx, dy]")

    return SceneObject(
        shape,
        _integer(owner, "depth", entry["depth"]),
        _integer(owner, "row", entry["row"]),
        _integer(owner, "col", entry["col"]),
        _integer(owner, "height", entry["height"]),
        _integer(owner, "width", entry["width"]),
        (_integer(owner, "velocity", velocity[0]), _integer(owner, "velocity", velocity[1])),
    )


def validate_scene_spec(spec: SceneSpec) -> None:
    """Checks that a scene can be rendered.

    Raises:
        InputError: A dimension is not positive, a depth is outside [0, 255], an object moves more than 32
            pixels per frame or the noise settings are out of range.
    """
    if spec.width <= 0 or spec.height <= 0 or spec.frames <= 0:
        raise InputError("scene dimensions and frame count must be positive")
    if not 0 <= spec.background <= MAX_SAMPLE:
        raise InputError(f"background depth {spec.background} outside [0, {MAX_SAMPLE}]")
    if not 0 <= spec.noise_amplitude <= MAX_SAMPLE:
        raise InputError(f"noise amplitude {spec.noise_amplitude} outside [0, {MAX_SAMPLE}]")
    if not 0.0 <= spec.noise_density <= 1.0:
        raise InputError(f"noise density {spec.noise_density} outside [0, 1]")

    for index, item in enumerate(spec.objects):
        if not 0 <= item.depth <= MAX_SAMPLE:
            raise InputError(f"object {index}: depth {item.depth} outside [0, {MAX_SAMPLE}]")
        if item.height <= 0 or item.width <= 0:
            raise InputError(f"object {index}: its size must be positive")
        if max(abs(item.velocity[0]), abs(item.velocity[1])) > MAX_VELOCITY:
            raise InputError(f"object {index}: velocity {item.velocity} exceeds {MAX_VELOCITY} pixels per frame")


def load_scene_spec(text: str) -> SceneSpec:
    """Parses a YAML scene description.

    Example:
        >>> load_scene_spec('''
        ... width: 128
        ... height: 128
        ... frames: 8
        ... objects:
        ...   - {shape: ellipse, depth: 200, row: 16, col: 16, height: 40, width: 60, velocity: [2, 1]}
        ... ''')

    Raises:
        InputError: The text is not valid YAML or doesn't describe a valid scene.
    """
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise InputError(f"the scene spec is not valid YAML: {err}") from err

    document = _check_keys("the scene spec", document, _SCENE_KEYS, {"width", "height", "frames"})
    objects = document.get("objects") or []
    if not isinstance(objects, list):
        raise InputError("the scene spec: 'objects' must be a list")

    density = document.get("noise_density", 0.0)
    if isinstance(density, bool) or not isinstance(density, (int, float)):
        raise InputError(f"the scene spec: 'noise_density' must be a number, got {density!r}")

    spec = SceneSpec(
        _integer("the scene spec", "width", document["width"]),
        _integer("the scene spec", "height", document["height"]),
        _integer("the scene spec", "frames", document["frames"]),
        _integer("the scene spec", "background", document.get("background", 128)),
        tuple(_load_object(index, entry) for index, entry in enumerate(objects)),
        _integer("the scene spec", "noise_amplitude", document.get("noise_amplitude", 0)),
        float(density),
        _integer("the scene spec", "seed", document.get("seed", 0)),
    )
    validate_scene_spec(spec)
    return spec


def _draw(canvas: np.ndarray, item: SceneObject, frame: int) -> None:
    top = item.row + frame * item.velocity[1]
    left = item.col + frame * item.velocity[0]
    rows, cols = np.ogrid[top : top + item.height, left : left + item.width]

    if item.shape is Shape.RECTANGLE:
        inside = np.ones((item.height, item.width), dtype=bool)
    else:
        centre_row, centre_col = top + (item.height - 1) / 2, left + (item.width - 1) / 2
        inside = ((rows - centre_row) / (item.height / 2)) ** 2 + ((cols - centre_col) / (item.width / 2)) ** 2 <= 1

    height, width = canvas.shape
    visible = (rows >= 0) & (rows < height) & (cols >= 0) & (cols < width) & inside
    canvas[np.broadcast_to(rows, visible.shape)[visible], np.broadcast_to(cols, visible.shape)[visible]] = item.depth


def generate(spec: SceneSpec) -> Sequence:
    """Renders a synthetic depth sequence.

    Objects are painted in order over the background at their position in each frame. Flicker noise then
    offsets each pixel independently with probability `noise_density` by ±1..`noise_amplitude`. The result
    only depends on the spec, the seed included.

    Raises:
        InputError: The spec is invalid.
    """
    validate_scene_spec(spec)
    random = np.random.default_rng(spec.seed)
    frames = []
    for index in range(spec.frames):
        canvas = np.full((spec.height, spec.width), spec.background, dtype=np.int64)
        for item in spec.objects:
            _draw(canvas, item, index)

        if spec.noise_amplitude > 0 and spec.noise_density > 0:
            flicker = random.random(canvas.shape) < spec.noise_density
            offsets = random.integers(1, spec.noise_amplitude + 1, canvas.shape) * random.choice([-1, 1], canvas.shape)
            canvas = np.clip(canvas + flicker * offsets, 0, MAX_SAMPLE)

        frames.append(pad_frame(canvas))

    messages.debug(f"generated {spec.frames} frames of {spec.width}x{spec.height} with {len(spec.objects)} objects")
    return Sequence(tuple(frames))


def measure_zero_proportion(sequence: Sequence) -> float:
    """The proportion of zero temporal differences between consecutive frames, over the original region.

    Raises:
        InputError: The sequence has fewer than two frames.
    """
    if len(sequence) < 2:
        raise InputError("measuring temporal differences needs at least two frames")

    stack = np.stack([frame.cropped.astype(np.int64) for frame in sequence.frames])
    return float(np.mean(np.diff(stack, axis=0) == 0))


def density_for_zero_proportion(target: float) -> float:
    """The flicker density at which a pixel keeps its value across two frames with probability `target`.

    A pixel is unchanged when neither frame flickers it, (1 - d)², so d = 1 - sqrt(target).

    Raises:
        InputError: The target is outside [0, 1].
    """
    if not 0.0 <= target <= 1.0:
        raise InputError(f"the target zero proportion must lie in [0, 1], got {target}")
    return 1 - math.sqrt(target)
