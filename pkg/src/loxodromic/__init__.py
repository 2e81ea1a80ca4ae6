"""Exact dynamics of loxodromic plane and torus automorphisms over Q and F_q(t)."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .fields import QQ, Factored, function_field, parse_point  # noqa: F401
from .places import (Place, abs_log, parse_place, product_formula_check,  # noqa: F401
                     weil_height, weil_height_by_places)
from .torus import GLZ2Matrix, PseudoMonomialMap, dynamical_degree, torus_point  # noqa: F401
from .henon import PlaneAutomorphism, apply_plane, plane_dynamical_degree  # noqa: F401
from .frobenius import AdditivePoly, FrobGeneratorWord  # noqa: F401
from .orbits import detect_periodicity, iterate_orbit, log_orbit  # noqa: F401
from .intersect import common_iterate_search, find_intersections  # noqa: F401
from .specs import parse_map_spec, serialize_map  # noqa: F401
from .config import Limits  # noqa: F401
