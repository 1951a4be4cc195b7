"""Enumeration and realization of planar vertex-transitive graphs via labeling schemes."""

from .border_automaton import build_automaton, is_aperiodic, orbits, primitive_type_vector, scheme_automaton, scheme_ptv
from .builder import build_ball, recover_scheme
from .cayley_analysis import is_cayley, stabilizer
from .enumerator import enumerate_schemes
from .geometry import Geometry, GeometryError, classify_geometry, solve_edge_length
from .scheme_core import INF, LabelingScheme, SchemeError, VectorPair, make_neighborhood, scheme_from_choices

__version__ = "0.1.0"
