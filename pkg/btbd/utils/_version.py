from importlib import metadata

from ._files import has_config_file
from ._config import get_config_value


def _safely_get_distribution_version() -> str:
    """Get the installed btbd version, or a placeholder when running from a source checkout.

    Returns:
        The distribution version as `str`.
    """
    try:
        return metadata.version("btbd")
    except metadata.PackageNotFoundError:
        return "0.0.0+source"


def _safely_get_configuration_version() -> str | None:
    """Get the value from configuration, or return `None` on throwing.

    Returns:
        The configuration version as `str` if found, else `None`
    """
    try:
        version = get_config_value("version")

        if isinstance(version, str):
            return version

        return None
    except FileNotFoundError:
        return None


def has_matching_versions() -> bool:
    """Checks the configuration value for version with the btbd distribution version.

    Notes:
        When the current directory has no configuration file, or the file pins no version, always returns True.

    Returns:
        bool: Whether the configuration version matches the actual distribution version.
    """
    if not has_config_file() or CONFIGURATION_VERSION is None:
        return True

    return DISTRIBUTION_VERSION == CONFIGURATION_VERSION


DISTRIBUTION_VERSION = _safely_get_distribution_version()
CONFIGURATION_VERSION = _safely_get_configuration_version()
