"""Groebner-basis cryptanalysis toolkit for the Ciminion and Hydra PRFs."""

__version__ = "0.1.0"
