from functools import reduce
from typing import Any
import yaml

CONFIG_FILE = "btbdconfig.yaml"
_MISSING = object()


def get_config_value(keys: str, default: Any = _MISSING) -> Any:
    """Retrieves a configuration value from the btbd configuration file.

    Args:
        keys (str): The string of (nested) dictionary values.
        default: Returned when the configuration file or the key does not exist.

    Note:
        You can find nested keys by introducing '.' in your `keys` value.
        foo.bar will be looked up as: `config[foo][bar]`.
        A value can have any default Yaml scalar type and will be loaded as its Python equivalent.

    Raises:
        FileNotFoundError: There is no configuration file and no default was given.

    Returns:
        The value in the configuration. When not found: `default` if given, else an empty string.
    """
    try:
        with open(CONFIG_FILE, "r", encoding="utf-8") as file:
            config = yaml.safe_load(file)
    except FileNotFoundError:
        if default is _MISSING:
            raise
        return default

    fallback = "" if default is _MISSING else default
    return reduce(
        lambda d, key: d.get(key, fallback) if isinstance(d, dict) else fallback,
        keys.split("."),
        config,
    )
