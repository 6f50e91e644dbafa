"""Exact coarse-geometry invariants on finite metric spaces and their integer injective hulls."""

__version__ = "0.1.0"
