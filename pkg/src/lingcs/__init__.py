"""Exact verification of linear generalised complex structures on TE⊕T*E."""

__version__ = "0.1.0"
