"""Exact combinatorics of spherical varieties in arbitrary characteristic.

The package models p-spherical systems (character lattice, spherical roots,
colors with their functionals and inseparability degrees), validates them
against the axiom list, and computes localizations at Levi subsets and at
sets of neighboring roots. All arithmetic is done over ``int`` and
``fractions.Fraction``.
"""
from __future__ import annotations

from .axioms import AxiomReport, load_catalog, parse_catalog, validate
from .io import InputError, dumps_system, load_system, loads_system, save_system
from .lattice import IntegerLattice, intersect, is_primitive, member, member_p, normal_form, zs_cap_xip
from .localization import (LocalizationError, LocalizationResult, check_neighbor_inequalities,
                           is_neighbor_set, localize_at_S, localize_at_Sigma, neighbor_sets)
from .polyhedra import (ConeQ, Fan, cone_from_inequalities, cone_from_rays, dual_cone, extremal_rays,
                        faces, is_face, localize_fan, relint_contains, validate_fan)
from .roots import RootDatum, adapted_coweight, build_root_datum, coroot_restriction
from .spherical import (ColorRecord, PSphericalSystem, SphericalError, classify_types,
                        spherical_roots_from_cone, valuation_cone)

__version__ = "0.1.0"

__all__ = [
    "AxiomReport", "ColorRecord", "ConeQ", "Fan", "InputError", "IntegerLattice",
    "LocalizationError", "LocalizationResult", "PSphericalSystem", "RootDatum", "SphericalError",
    "adapted_coweight", "build_root_datum", "check_neighbor_inequalities", "classify_types",
    "cone_from_inequalities", "cone_from_rays", "coroot_restriction", "dual_cone", "dumps_system",
    "extremal_rays", "faces", "intersect", "is_face", "is_neighbor_set", "is_primitive",
    "load_catalog", "load_system", "loads_system", "localize_at_S", "localize_at_Sigma",
    "localize_fan", "member", "member_p", "neighbor_sets", "normal_form", "parse_catalog",
    "relint_contains", "save_system", "spherical_roots_from_cone", "valuation_cone",
    "validate", "validate_fan", "zs_cap_xip",
]
