"""Unit tests for skigp.kernels."""
