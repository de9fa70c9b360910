"""Python bindings for the lvharvest C++ core."""

from ._lvharvest import *  # noqa: F401,F403
from ._lvharvest import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
