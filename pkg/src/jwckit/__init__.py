"""Numerical Kobayashi geometry on convex domains and boundary behaviour of holomorphic maps."""

from .core import DegenerateBoundaryError, DomainError, EstimationError
from .domains import Domain, ball, disc, egg, halfplane, parse_domain, polynomial, tube
from .kobayashi import distance_bounds, metric_bounds, refine_distance_upper
from .maps import HolomorphicMap, catalog_map, example_catalog

__version__ = "0.1.0"

__all__ = [
    "DegenerateBoundaryError",
    "Domain",
    "DomainError",
    "EstimationError",
    "HolomorphicMap",
    "ball",
    "catalog_map",
    "disc",
    "distance_bounds",
    "egg",
    "example_catalog",
    "halfplane",
    "metric_bounds",
    "parse_domain",
    "polynomial",
    "refine_distance_upper",
    "tube",
]
