"""Semilinear sets, Smith normal form, integer cones and cone hitting."""

from .cones import (
    LinearConstraint,
    TranslatedCone,
    cone_dualize,
    cone_member,
    hilbert_basis,
    integer_feasibility,
    integral_caratheodory,
)
from .ihp import IhpInstance, bounded_php_oracle, ihp_to_php, simplicial_ihp_to_php, wwhp_to_ihp
from .semilinear import LinearSet, ProgressionSet, SemilinearSet, parikh
from .snf import extend_to_basis, lattice_hitting_set, smith_normal_form

__all__ = [
    "IhpInstance",
    "LinearConstraint",
    "LinearSet",
    "ProgressionSet",
    "SemilinearSet",
    "TranslatedCone",
    "bounded_php_oracle",
    "cone_dualize",
    "cone_member",
    "extend_to_basis",
    "hilbert_basis",
    "ihp_to_php",
    "integer_feasibility",
    "integral_caratheodory",
    "lattice_hitting_set",
    "parikh",
    "simplicial_ihp_to_php",
    "smith_normal_form",
    "wwhp_to_ihp",
]
