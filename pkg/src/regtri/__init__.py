"""Minimum triangle counts in regular graphs."""
from ._backend import BACKEND
__version__ = "0.1.0"
