"""Leaf-removal core breaking by Core Influence, and vertex covers built from it."""

__version__ = "0.1.0"
