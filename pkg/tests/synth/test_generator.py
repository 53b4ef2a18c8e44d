import numpy as np
import pytest

from btbd.core.exceptions import InputError
from btbd.ddl.synth import SceneObject, SceneSpec, Shape
from btbd.synth import density_for_zero_proportion, generate, load_scene_spec, measure_zero_proportion

SCENE = """
width: 96
height: 72
frames: 4
background: 40
seed: 7
objects:
  - {shape: rectangle, depth: 200, row: 10, col: 8, height: 12, width: 16, velocity: [3, 1]}
  - {shape: ellipse, depth: 90, row: 40, col: 50, height: 20, width: 30}
"""


def test_load_scene_spec() -> None:
    spec = load_scene_spec(SCENE)

    assert (spec.width, spec.height, spec.frames, spec.background, spec.seed) == (96, 72, 4, 40, 7)
    assert spec.objects[0] == SceneObject(Shape.RECTANGLE, 200, 10, 8, 12, 16, (3, 1))
    assert spec.objects[1].shape is Shape.ELLIPSE and spec.objects[1].velocity == (0, 0)


def test_generate_is_deterministic() -> None:
    spec = SceneSpec(64, 64, 3, noise_amplitude=4, noise_density=0.3, seed=11)
    first, second = generate(spec), generate(spec)

    for left, right in zip(first.frames, second.frames):
        assert np.array_equal(left.samples, right.samples)
    reseeded = generate(SceneSpec(64, 64, 3, noise_amplitude=4, noise_density=0.3, seed=12))
    assert not np.array_equal(reseeded.frames[1].samples, first.frames[1].samples)


def test_empty_scene_is_constant() -> None:
    sequence = generate(SceneSpec(50, 30, 3, background=77))

    assert len(sequence) == 3
    assert (sequence.original_width, sequence.original_height) == (50, 30)
    assert (sequence.width, sequence.height) == (64, 64)
    for frame in sequence.frames:
        assert (frame.samples == 77).all()
    assert measure_zero_proportion(sequence) == 1.0


def test_objects_move() -> None:
    sequence = generate(load_scene_spec(SCENE))

    for index, frame in enumerate(sequence.frames):
        top, left = 10 + index, 8 + 3 * index
        cropped = frame.cropped
        assert (cropped[top : top + 12, left : left + 16] == 200).all()
        assert cropped[top - 1, left] == 40 and cropped[top, left - 1] == 40
        # The ellipse stays put and is clipped to its bounding box.
        assert cropped[50, 65] == 90
        assert cropped[40, 50] == 40


def test_objects_leave_the_frame() -> None:
    spec = SceneSpec(64, 64, 3, background=0, objects=(SceneObject(Shape.RECTANGLE, 255, 0, 40, 8, 30, (20, 0)),))
    sequence = generate(spec)

    assert np.count_nonzero(sequence.frames[0].cropped) == 8 * 24
    assert np.count_nonzero(sequence.frames[1].cropped) == 8 * 4
    assert np.count_nonzero(sequence.frames[2].cropped) == 0


@pytest.mark.parametrize("target", [0.6, 0.8, 0.95])
def test_flicker_density_controls_zero_proportion(target: float) -> None:
    spec = SceneSpec(256, 256, 6, noise_amplitude=3, noise_density=density_for_zero_proportion(target), seed=3)
    assert measure_zero_proportion(generate(spec)) == pytest.approx(target, abs=0.02)


def test_density_for_zero_proportion() -> None:
    assert density_for_zero_proportion(1.0) == 0.0
    assert density_for_zero_proportion(0.0) == 1.0
    assert density_for_zero_proportion(0.81) == pytest.approx(0.1)
    with pytest.raises(InputError):
        density_for_zero_proportion(1.5)


@pytest.mark.parametrize(
    "text",
    [
        "width: 64\nheight: 64\n",
        "width: 64\nheight: 64\nframes: 0\n",
        "width: 64\nheight: 64\nframes: 2\ncolour: red\n",
        "width: 64\nheight: 64\nframes: 2\nbackground: 300\n",
        "width: 64\nheight: 64\nframes: 2\nnoise_density: 2\n",
        "width: 64.5\nheight: 64\nframes: 2\n",
        "width: 64\nheight: 64\nframes: 2\nobjects: {shape: rectangle}\n",
        "width: 64\nheight: 64\nframes: 2\nobjects:\n"
        "  - {shape: star, depth: 1, row: 0, col: 0, height: 4, width: 4}\n",
        "width: 64\nheight: 64\nframes: 2\nobjects:\n"
        "  - {shape: ellipse, depth: 1, row: 0, col: 0, height: 4, width: 4, velocity: [33, 0]}\n",
        "width: [64\n",
        "- just a list\n",
    ],
)
def test_invalid_scene_specs(text: str) -> None:
    with pytest.raises(InputError):
        load_scene_spec(text)


def test_measure_needs_two_frames() -> None:
    with pytest.raises(InputError):
        measure_zero_proportion(generate(SceneSpec(8, 8, 1)))
