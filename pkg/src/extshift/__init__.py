"""Exact exterior algebra, slow shifting and certified extremal bounds."""

from __future__ import annotations

from .exterior import KForm, Operator, apply_operator, divide_by_one_form, format_form, parse_form, wedge
from .setfam import SetFamily, comb_shift, is_intersecting, is_shifted, max_intersecting_search
from .shifting import (TMatrix, decompose_stable, is_stable, limit_action, m_matrix, n_matrix, o_matrix,
                       slow_shift, slow_shift_element, stabilize, stable_structure)
from .subspace import (Subspace, annihilator_one_forms, change_basis, colon_by_one_form, from_generators,
                       has_monomial_basis, is_cross_annihilating, is_monomial_wrt, is_self_annihilating)
from .tfield import QQ, TPoly, canonical_projective_rep, eval_at_zero, get_field, t_valuation

__version__ = "0.1.0"

__all__ = [
    "QQ", "TPoly", "get_field", "t_valuation", "canonical_projective_rep", "eval_at_zero",
    "KForm", "Operator", "wedge", "apply_operator", "divide_by_one_form", "parse_form", "format_form",
    "Subspace", "from_generators", "annihilator_one_forms", "change_basis", "colon_by_one_form",
    "has_monomial_basis", "is_cross_annihilating", "is_self_annihilating", "is_monomial_wrt",
    "SetFamily", "comb_shift", "is_shifted", "is_intersecting", "max_intersecting_search",
    "TMatrix", "n_matrix", "m_matrix", "o_matrix", "limit_action", "slow_shift", "slow_shift_element",
    "stabilize", "is_stable", "stable_structure", "decompose_stable",
]
