"""Toolkit for counting and packing Hamilton cycles with fixed consecutive
overlap in dense uniform hypergraphs, via reductions to bipartite matchings."""

__version__ = "0.1.0"
