"""Exponential Levy pricing with the market-symmetry shortcut.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._levysym import *  # noqa: F401,F403
from ._levysym import __doc__  # noqa: F401

__version__ = "0.1.0"
