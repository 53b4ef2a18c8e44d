from ._cli import run_console_application
