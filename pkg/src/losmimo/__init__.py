"""Capacity and outage statistics for line-of-sight MIMO satellite links
received on a uniform linear array."""

__version__ = "0.1.0"
