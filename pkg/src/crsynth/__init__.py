"""Weighted Church-Rosser systems of finite index for finite monoids."""

from .algebra import Dfa, FiniteMonoid, MonoidHom, cyclic_group, permutation_group, transition_monoid
from .errors import ConstructionError, CrsError, GcdObstruction, ResourceCapExceeded, VerificationFailed
from .rewriting import Rule, SemiThueSystem, normal_form, normalize, quotient_monoid, verify_crs
from .synthesis import SynthesisOptions, group_system, monoid_system, recognize, simple_group_system, synthesize
from .words import WeightedAlphabet

__version__ = "0.1.0"
