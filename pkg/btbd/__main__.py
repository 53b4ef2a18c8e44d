import sys

from btbd.app import run_console_application

if __name__ == "__main__":
    sys.exit(run_console_application())
