"""Unit tests for skigp.interp."""
