import pathlib

from btbd.utils import files


def test_write_and_read_bytes(tmp_path) -> None:
    target = f"{tmp_path}/nested/deeper/stream.btbd"
    files.write_bytes(target, b"\x00\xffBTBD")

    assert pathlib.Path(target).exists() is True
    assert files.read_bytes(target) == b"\x00\xffBTBD"

    # Existing directories are reused
    files.write_bytes(f"{tmp_path}/nested/other.btbd", b"")
    assert files.read_bytes(f"{tmp_path}/nested/other.btbd") == b""


def test_write_and_read_text(tmp_path) -> None:
    files.write_text(f"{tmp_path}/curve.csv", "bpp,psnr\n0.5,48.0\n")
    assert files.read_text(f"{tmp_path}/curve.csv") == "bpp,psnr\n0.5,48.0\n"


def test_has_config_file(tmp_path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    assert files.has_config_file() is False
    pathlib.Path(f"{tmp_path}/btbdconfig.yaml").touch()
    assert files.has_config_file() is True
