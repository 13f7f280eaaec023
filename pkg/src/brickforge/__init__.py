"""Exact combinatorial models of brick manifolds.

Curve graphs with certified distances, tight-geodesic hierarchies, block
and tube decompositions, meridian-coefficient metrics, and ascending
exhaustions of geometric limits, all in exact rational arithmetic.
"""

__version__ = "0.1.0"
