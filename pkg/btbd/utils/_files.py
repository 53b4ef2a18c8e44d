import os

from ._config import CONFIG_FILE
from ._context import Expects


def has_config_file() -> bool:
    """Checks whether the current directory carries a btbd configuration file.

    Returns:
        bool: Whether btbdconfig.yaml exists in the working directory.
    """
    return os.path.isfile(CONFIG_FILE)


def read_bytes(path: str) -> bytes:
    """Reads a whole file into memory.

    Args:
        path (str): The path to the file.

    Returns:
        bytes: The file contents.
    """
    with open(path, "rb") as file:
        return file.read()


def write_bytes(path: str, data: bytes) -> None:
    """Writes data to a file, creating missing parent directories.

    Args:
        path (str): The path to the file that should be written.
        data (bytes): The contents to write.
    """
    directory = os.path.dirname(path)
    if directory:
        with Expects([FileExistsError]):
            os.makedirs(directory)

    with open(path, "wb") as file:
        file.write(data)


def read_text(path: str) -> str:
    """Reads a UTF-8 text file.

    Args:
        path (str): The path to the file.

    Returns:
        str: The decoded file contents.
    """
    with open(path, "r", encoding="utf-8") as file:
        return file.read()


def write_text(path: str, text: str) -> None:
    """Writes a UTF-8 text file, creating missing parent directories.

    Args:
        path (str): The path to the file that should be written.
        text (str): The text to write.
    """
    write_bytes(path, text.encode("utf-8"))
