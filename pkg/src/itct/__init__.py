"""itct: tabular transformer pipeline for binary IoT traffic classification."""

__version__ = "0.3.0"
