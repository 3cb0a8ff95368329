"""Ramsey-type matching problems in edge-colored complete r-uniform hypergraphs."""

__version__ = "0.1.0"
