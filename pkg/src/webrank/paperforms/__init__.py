"""Closed-form invariant expressions used to corroborate the engine."""

from .forms import (
    NotApplicable,
    c012_thm7,
    c5_c0,
    maxrank4_forms,
    maxrank4_relations,
    rank1_J,
    rank2_G,
)

__all__ = [
    "NotApplicable",
    "c012_thm7",
    "c5_c0",
    "maxrank4_forms",
    "maxrank4_relations",
    "rank1_J",
    "rank2_G",
]
