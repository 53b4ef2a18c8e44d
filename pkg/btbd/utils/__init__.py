"""
These helper methods are used throughout btbd for configuration, file handling and version checks.
It is highly recommended to import the used types of utils from the __init__.py.
"""
import btbd.utils._config as config
import btbd.utils._context as context
import btbd.utils._files as files
import btbd.utils._version as version
