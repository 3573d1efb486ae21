"""Filling paths, protoforests and folds for free splittings of free groups."""

from .core import BaseGraph, FreeSplitting, GraphMorphism, format_path, parse_path
from .errors import (InapplicableError, NoWitnessError, ParseError, PropertyViolation,
                     ResourceLimitError, SplitfoldError, UnsupportedConfiguration, ValidationError)
from .fixture import Fixture, emit_fixture, load, parse_fixture
from .protoforest import blowup_witness, expansion_enumerate, filling_support, fills, overlap_generators
from .subgroup import StallingsGraph, free_factor_support
from .words import Basis, GroupElement

__all__ = [
    "Basis", "BaseGraph", "Fixture", "FreeSplitting", "GraphMorphism", "GroupElement",
    "InapplicableError", "NoWitnessError", "ParseError", "PropertyViolation", "ResourceLimitError",
    "SplitfoldError", "StallingsGraph", "UnsupportedConfiguration", "ValidationError",
    "blowup_witness", "emit_fixture", "expansion_enumerate", "filling_support", "fills",
    "format_path", "free_factor_support", "load", "overlap_generators", "parse_fixture", "parse_path",
]
