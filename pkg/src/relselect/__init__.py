"""Relative select, rank and access over similar strings."""
