"""Multi-transitivity toolkit: hitting-time sets, vector-generated families, theorem cross-checks."""

__version__ = "0.1.0"
