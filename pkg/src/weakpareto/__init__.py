"""Test problems with weak Pareto boundaries, enclosed-volume analysis and experiments."""

__version__ = "0.1.0"
