"""Spectral operators and a verification harness for weighted Kato-Ponce inequalities."""
from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
