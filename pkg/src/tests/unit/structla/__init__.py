"""Unit tests for skigp.structla."""
