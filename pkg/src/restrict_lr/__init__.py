"""Restricted Lie-Rinehart algebras: exact checkers, enveloping algebras,
Beck modules, extension classification and a desk-scale Brauer lab."""

from .beck import BeckModule, beck_derivations, beck_module_assemble, beck_module_check, natural_module, trivial_module
from .brauer import crossed_product, ext_to_brauer_demo, regular_extension, setup as brauer_setup, verify_split_witness
from .commalg import CommAlgebra, InsepExtension, derivation_space, hochschild_relation_check, truncated_polynomial
from .document import AlgebraDocument, DocumentError, parse, serialize
from .ext import ExtensionData, baer_sum, build_extension, classify_ext, equivalent
from .field import GF, RationalFunctionField
from .lrin import LieRinehart, check_lrr_axioms, der_algebra, from_free, semidirect, transformation_algebra
from .report import Check, Report
from .rlie import RestrictedLie, check_restricted, free_restricted_lie, s_coefficients
from .uenv import Enveloping, pbw_rank_check, rinehart_basis_check, universal_property_check

__all__ = [
    "AlgebraDocument", "BeckModule", "Check", "CommAlgebra", "DocumentError", "Enveloping", "ExtensionData",
    "GF", "InsepExtension", "LieRinehart", "RationalFunctionField", "Report", "RestrictedLie",
    "baer_sum", "beck_derivations", "beck_module_assemble", "beck_module_check", "brauer_setup",
    "build_extension", "check_lrr_axioms", "check_restricted", "classify_ext", "crossed_product",
    "der_algebra", "derivation_space", "equivalent", "ext_to_brauer_demo", "free_restricted_lie", "from_free",
    "hochschild_relation_check", "natural_module", "parse", "pbw_rank_check", "regular_extension",
    "rinehart_basis_check", "s_coefficients", "semidirect", "serialize", "transformation_algebra",
    "trivial_module", "truncated_polynomial", "universal_property_check", "verify_split_witness",
]
