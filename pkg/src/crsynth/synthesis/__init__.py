from .groups import (
    GroupConstructionState,
    build_omega,
    group_dispatch,
    group_system,
    make_gammas,
    make_normal_forms,
    marker_rules,
    prepare_group_construction,
)
from .lemmas import base_single_letter, expand, extended_alphabet, lift_rules, pad_system, power_rules
from .monoids import RecognizedLanguage, find_disagreement, monoid_system, recognize, synthesize
from .options import STRATEGIES, SynthesisOptions
from .simple import common_weight_representatives, simple_group_system

__all__ = [
    "GroupConstructionState",
    "RecognizedLanguage",
    "STRATEGIES",
    "SynthesisOptions",
    "base_single_letter",
    "build_omega",
    "common_weight_representatives",
    "expand",
    "extended_alphabet",
    "find_disagreement",
    "group_dispatch",
    "group_system",
    "lift_rules",
    "make_gammas",
    "make_normal_forms",
    "marker_rules",
    "monoid_system",
    "pad_system",
    "power_rules",
    "prepare_group_construction",
    "recognize",
    "simple_group_system",
    "synthesize",
]
