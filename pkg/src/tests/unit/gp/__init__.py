"""Unit tests for skigp.gp."""
