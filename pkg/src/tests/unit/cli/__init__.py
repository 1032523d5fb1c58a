"""Unit tests for skigp.cli."""
