"""Desk-scale workbench for tight components, fractional matchings and
Ramsey search in 2-edge-coloured uniform hypergraphs."""

__version__ = "0.1.0"
