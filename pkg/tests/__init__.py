"""Tests for the Hilbert-Samuel coefficient toolkit."""
