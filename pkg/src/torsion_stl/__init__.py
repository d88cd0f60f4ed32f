"""Exact stable torsion length in free products of two finite groups."""
from .certify import StlOptions, StlReport, compute_stl, extract_factorization, tl_upper_bound
from .constructions import (approximate_by_tree, branched_cover_improvement,
                            certificate_commutator, certificate_product, finite_cover,
                            strip_surface)
from .groups import FiniteGroup, element_order, subgroup_closure, symmetric_group_s3
from .lp import brute_force_vertices, build_polyhedron, export_lp_text, parse_lp_text, solve_exact
from .pieces import (all_turn_types, commutator_collection, compatible,
                     generic_bounded_collection, make_piece, product_collection)
from .surfaces import SimpleSurface, euler_characteristic, kappa
from .words import FreeProduct, FreeProductWord, TorsionFactorization, parse_word

__all__ = [
    "StlOptions", "StlReport", "compute_stl", "extract_factorization", "tl_upper_bound",
    "approximate_by_tree", "branched_cover_improvement", "certificate_commutator",
    "certificate_product", "finite_cover", "strip_surface", "FiniteGroup", "element_order",
    "subgroup_closure", "symmetric_group_s3", "brute_force_vertices", "build_polyhedron",
    "export_lp_text", "parse_lp_text", "solve_exact", "all_turn_types", "commutator_collection",
    "compatible", "generic_bounded_collection", "make_piece", "product_collection",
    "SimpleSurface", "euler_characteristic", "kappa", "FreeProduct", "FreeProductWord",
    "TorsionFactorization", "parse_word",
]
