"""Hilbert-Samuel coefficient toolkit."""
