"""Exact verification toolkit for Leonard systems and the transition maps
between their 24 distinguished bases."""

__version__ = "0.1.0"
