"""Finite subdivision rule for the n-torus, with a word-metric lattice oracle."""
from .cover import ball, exposed_faces, refine_exposed
from .geom import Complex, PLCell, Simplex, TileType, euler_characteristic, labeled_isomorphic
from .rule import SubdivisionRule, build_template, initial_sphere, iterate, subdivide, transition_matrix

__version__ = "0.1.0"
