"""MomentLab test suite."""
