from dataclasses import dataclass, field
from enum import Enum


class Shape(Enum):
    RECTANGLE = "rectangle"
    ELLIPSE = "ellipse"


@dataclass(frozen=True)
class SceneObject:
    """A rigid, constant-depth object translating by a whole number of pixels per frame.

    Attributes:
        shape: Rectangle or ellipse (inscribed in the bounding box).
        depth: The object depth value in [0, 255].
        row: Top of the bounding box in the first frame.
        col: Left of the bounding box in the first frame.
        height: Bounding box height.
        width: Bounding box width.
        velocity: Per-frame translation (dx, dy).
    """

    shape: Shape
    depth: int
    row: int
    col: int
    height: int
    width: int
    velocity: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class SceneSpec:
    """Description of a synthetic depth sequence.

    Attributes:
        width: Frame width in pixels.
        height: Frame height in pixels.
        frames: Number of frames.
        background: Background depth value.
        objects: Objects drawn in order, later ones on top.
        noise_amplitude: Largest absolute flicker-noise offset, 0 disables noise.
        noise_density: Probability that a pixel flickers in a given frame.
        seed: Seed of the noise generator.
    """

    width: int
    height: int
    frames: int
    background: int = 128
    objects: tuple[SceneObject, ...] = field(default_factory=tuple)
    noise_amplitude: int = 0
    noise_density: float = 0.0
    seed: int = 0
