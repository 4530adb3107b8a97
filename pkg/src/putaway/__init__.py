"""Few-shot tidying preferences, benchmark harness, and 2D simulator."""

__version__ = "0.1.0"
