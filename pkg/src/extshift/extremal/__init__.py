"""Extremal bounds, search oracles and the certified nontrivial-annihilation bound."""

from __future__ import annotations

from .bounds import cross_bound, ekr_bound, hm_bound
from .certify import ANNIHILATOR_CASCADE, STABLE_2FORM, STABLE_MONOMIAL, Certificate, certify_hm
from .pairs import reduce_pair_to_monomial, verify_cross
from .sample import sample_nontrivial_selfann

__all__ = [
    "ekr_bound",
    "hm_bound",
    "cross_bound",
    "reduce_pair_to_monomial",
    "verify_cross",
    "certify_hm",
    "Certificate",
    "STABLE_MONOMIAL",
    "STABLE_2FORM",
    "ANNIHILATOR_CASCADE",
    "sample_nontrivial_selfann",
]
