"""Symbolic and numeric verification of the Hochschild 3-cycle construction
on matrix quantum group algebras."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
