"""Unit tests for skigp packages."""
