"""Finite shadows of a tower of curves built from the Fermat/Dwork pencil of K3 surfaces."""

__version__ = "0.1.0"
