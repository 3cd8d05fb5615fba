"""Desk-scale laboratory for hypergraph containers, metric-space counting and C4-free graphs."""

__version__ = "0.1.0"
