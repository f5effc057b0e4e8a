"""
Console messages for StabLab.

Status lines go to stderr so that anything written to stdout or --out stays
byte-identical between runs.
"""

import os
import sys

from dotenv import load_dotenv

load_dotenv()


def _flag(name: str) -> bool:
    return os.getenv(name, "false").strip().lower() in ("1", "true", "yes")


def status(message: str):
    """Print a status line unless STABLAB_QUIET is set."""
    if not _flag("STABLAB_QUIET"):
        print(message, file=sys.stderr)


def debug(message: str):
    """Print a debug line when DEBUG is set."""
    if _flag("DEBUG"):
        print(f"🐞 {message}", file=sys.stderr)


def warn(message: str):
    """Warnings are always shown."""
    print(f"⚠️  {message}", file=sys.stderr)
