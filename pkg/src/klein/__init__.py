"""Exact computations for unoriented (Klein) open-closed topological field theory."""
from . import ainfty, exactlin, graphs, hochschild, invcat, library, surfcat

__all__ = ["ainfty", "exactlin", "graphs", "hochschild", "invcat", "library", "surfcat"]
__version__ = "0.1.0"
