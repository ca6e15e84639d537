"""Exact lattice-free cuts for the two-row corner relaxation.

Typical use::

    from lfcuts import load_corpus, mixed_integer_hull_facets
    facets = mixed_integer_hull_facets(load_corpus("e1"))
"""

from __future__ import annotations

from .candidates import CandidateSet, enumerate_candidates, integral_hit_gamma
from .closure import ensure_full_cone, extreme_filter, implied, mixed_integer_hull_facets, triangle_closure_facets
from .conehull import AffineCone, ConeHull, HullFacet, cone_integer_hull, hull_facet_lines, hull_vertex_candidates
from .corpus import corpus, load_corpus, random_instance
from .facets import FacetList
from .instance import Instance, InstanceError, InstanceParseError, load_instance, parse_instance
from .latticefree import Body, Inequality, Tag, classify, is_lattice_free, verify_certificate
from .oracle import Window, brute_force_facets, brute_force_vertices, check_validity, oracle_facets

__all__ = [
    "AffineCone", "Body", "CandidateSet", "ConeHull", "FacetList", "HullFacet", "Inequality",
    "Instance", "InstanceError", "InstanceParseError", "Tag", "Window",
    "brute_force_facets", "brute_force_vertices", "check_validity", "classify", "cone_integer_hull",
    "corpus", "ensure_full_cone", "enumerate_candidates", "extreme_filter", "hull_facet_lines",
    "hull_vertex_candidates", "implied", "integral_hit_gamma", "is_lattice_free", "load_corpus",
    "load_instance", "mixed_integer_hull_facets", "oracle_facets", "parse_instance", "random_instance",
    "triangle_closure_facets", "verify_certificate",
]
