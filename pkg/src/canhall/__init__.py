"""Domestic canonical algebras over finite fields, their Hall numbers and the
Lie algebras spanned by indecomposable modules."""

from . import canon, ffla, hall, liealg, modbuild, rep

__all__ = ["canon", "ffla", "hall", "liealg", "modbuild", "rep"]
__version__ = "0.1.0"
