"""Rank-two p-group construction and fusion-system classification toolkit."""

from ._core import COMPILED

__version__ = "0.1.0"
__all__ = ["COMPILED", "__version__"]
