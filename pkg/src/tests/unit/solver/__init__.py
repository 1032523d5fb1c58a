"""Unit tests for skigp.solver."""
