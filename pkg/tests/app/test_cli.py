import pathlib

import numpy as np
import pytest

from btbd.app import run_console_application
from btbd.codec import load_sequence_file, store_raw
from btbd.ddl.synth import SceneObject, SceneSpec, Shape
from btbd.synth import generate

RAW_FLAGS = ["--width", "40", "--height", "24"]


@pytest.fixture(name="workspace")
def _workspace(monkeypatch, tmp_path) -> pathlib.Path:
    monkeypatch.chdir(tmp_path)
    scene = SceneSpec(40, 24, 3, background=60, objects=(SceneObject(Shape.RECTANGLE, 180, 4, 6, 8, 10, (2, 1)),))
    (tmp_path / "input.yuv").write_bytes(store_raw(generate(scene)))
    return tmp_path


def _encode(*flags: str) -> int:
    return run_console_application(["encode", "--in", "input.yuv", "--out", "stream.btbd", *RAW_FLAGS, *flags])


def test_lossless_round_trip(workspace) -> None:
    assert _encode() == 0
    assert run_console_application(["decode", "--in", "stream.btbd", "--out", "decoded.yuv"]) == 0

    assert (workspace / "stream.btbd").read_bytes()[:4] == b"BTBD"
    assert (workspace / "decoded.yuv").read_bytes() == (workspace / "input.yuv").read_bytes()


def test_near_lossless_round_trip(workspace) -> None:
    assert _encode("--q", "5", "--gop", "2", "--search-width", "8") == 0
    assert run_console_application(["decode", "--in", "stream.btbd", "--out", "decoded.pgm"]) == 0

    original = load_sequence_file(str(workspace / "input.yuv"), 40, 24)
    decoded = load_sequence_file(str(workspace / "decoded.pgm"))
    assert len(decoded) == 3
    for source, result in zip(original.frames, decoded.frames):
        assert np.abs(source.cropped.astype(int) - result.cropped.astype(int)).max() <= 2


def test_decode_report(workspace, capsys) -> None:
    assert _encode() == 0
    capsys.readouterr()
    flags = ["--report", "--reference", "input.yuv", *RAW_FLAGS]
    assert run_console_application(["decode", "--in", "stream.btbd", "--out", "out.yuv", *flags]) == 0

    output = capsys.readouterr().out
    assert "map modes" in output and "PSNR (dB)" in output
    assert " I " in output and " P " in output
    assert "inf" in output


def test_configuration_supplies_defaults(workspace) -> None:
    (workspace / "btbdconfig.yaml").write_text("encoder:\n  q: 4\n")
    assert _encode() == 1

    (workspace / "btbdconfig.yaml").write_text("encoder:\n  q: 3\n")
    assert _encode() == 0
    # The flag wins over the configuration.
    assert _encode("--q", "7") == 0


@pytest.mark.parametrize(
    "arguments",
    [
        ["encode", "--in", "input.yuv", "--out", "stream.btbd", *RAW_FLAGS, "--q", "4"],
        ["encode", "--in", "input.yuv", "--out", "stream.btbd", *RAW_FLAGS, "--q", "17"],
        ["encode", "--in", "input.yuv", "--out", "stream.btbd", *RAW_FLAGS, "--gop", "0"],
        ["encode", "--in", "input.yuv", "--out", "stream.btbd", *RAW_FLAGS, "--search-width", "256"],
        ["encode", "--in", "input.yuv", "--out", "stream.btbd"],
        ["encode", "--in", "input.yuv"],
        ["encode", "--in", "input.yuv", "--out", "stream.btbd", *RAW_FLAGS, "--q", "three"],
        ["transcode", "--in", "input.yuv"],
        ["help", "--command", "transcode"],
    ],
)
def test_usage_errors(workspace, arguments: list[str]) -> None:
    assert run_console_application(arguments) == 1
    assert not (workspace / "stream.btbd").exists()


def test_data_errors(workspace) -> None:
    assert _encode() == 0
    data = bytearray((workspace / "stream.btbd").read_bytes())
    data[0] ^= 0xFF
    (workspace / "broken.btbd").write_bytes(bytes(data))

    assert run_console_application(["decode", "--in", "broken.btbd", "--out", "out.yuv"]) == 2
    assert run_console_application(["decode", "--in", "missing.btbd", "--out", "out.yuv"]) == 2
    misshapen = ["--width", "41", "--height", "24"]
    assert run_console_application(["encode", "--in", "input.yuv", "--out", "x.btbd", *misshapen]) == 2


def test_stats(workspace, capsys) -> None:
    assert _encode("--q", "3") == 0
    assert run_console_application(["decode", "--in", "stream.btbd", "--out", "decoded.yuv"]) == 0
    capsys.readouterr()

    flags = ["--original", "input.yuv", "--decoded", "decoded.yuv", *RAW_FLAGS]
    assert run_console_application(["stats", *flags, "--bits", "stream.btbd"]) == 0
    output = capsys.readouterr().out
    assert "compression ratio" in output and "zero proportion p" in output
    assert "n/a" not in output

    assert run_console_application(["stats", *flags, "--bits", "960"]) == 0
    output = capsys.readouterr().out
    assert "0.3333" in output and "24.00x" in output and "n/a" in output

    assert run_console_application(["stats", *flags, "--bits", "0"]) == 2


def test_bd(workspace, capsys) -> None:
    (workspace / "a.csv").write_text("bpp,psnr\n0.5,40\n1,44\n2,48\n4,52\n")
    (workspace / "b.csv").write_text("bpp,psnr\n0.25,40\n0.5,44\n1,48\n2,52\n")
    assert run_console_application(["bd", "--curve-a", "a.csv", "--curve-b", "b.csv"]) == 0
    assert "-50.00" in capsys.readouterr().out

    (workspace / "c.csv").write_text("bpp,psnr\n0.5,40\n1,44\n")
    assert run_console_application(["bd", "--curve-a", "a.csv", "--curve-b", "c.csv"]) == 2


def test_synth(workspace) -> None:
    (workspace / "scene.yaml").write_text(
        "width: 48\nheight: 32\nframes: 4\nobjects:\n"
        "  - {shape: ellipse, depth: 220, row: 4, col: 4, height: 12, width: 12, velocity: [1, 0]}\n"
    )
    assert run_console_application(["synth", "--spec", "scene.yaml", "--out", "scene.pgm"]) == 0

    sequence = load_sequence_file(str(workspace / "scene.pgm"))
    assert len(sequence) == 4
    assert (sequence.original_width, sequence.original_height) == (48, 32)

    (workspace / "bad.yaml").write_text("width: 48\n")
    assert run_console_application(["synth", "--spec", "bad.yaml", "--out", "bad.pgm"]) == 2


def test_help(workspace, capsys) -> None:
    assert run_console_application([]) == 0
    output = capsys.readouterr().out
    for name in ("encode", "decode", "stats", "bd", "synth", "help"):
        assert name in output

    assert run_console_application(["help", "--command", "encode"]) == 0
    assert "--search-width" in capsys.readouterr().out
