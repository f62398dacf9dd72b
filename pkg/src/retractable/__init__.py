"""Retractable and Boolean-type retractable state-finite automata without outputs."""

from .automaton import (
    Automaton,
    AutomatonError,
    PartialAutomaton,
    StateMap,
    Subautomaton,
    find_isomorphism,
    generated,
    is_homomorphism,
    is_partial_homomorphism,
    kernel,
    partial_derived,
    quotient,
    run,
    subautomata,
    traps,
)
from .congruence import (
    Congruence,
    CongruenceLattice,
    all_congruences,
    complements,
    is_congruence,
    join,
    kernel_of_map,
    lattice_class,
    meet,
    rees,
)
from .construction import (
    ConstructionSpec,
    TreePoset,
    build,
    canonical_family,
    compose_phi,
    ideals,
    recover_spec,
    validate_spec,
)
from .retract import (
    RetractFamily,
    boolean_family,
    check_nested_retracts,
    check_rees_retract,
    is_boolean_type,
    is_retractable,
    retract_homomorphisms,
)
from .structure import (
    analyze,
    dilation_base,
    direct_sum_components,
    direct_sum_family,
    is_semi_connected,
    is_strongly_connected,
    is_strongly_trap_connected,
    lift_family_through_dilation,
    principal_factor,
)
from .textio import format_automaton, format_spec, parse_automaton, parse_spec

__version__ = "0.1.0"

__all__ = [
    "all_congruences",
    "analyze",
    "Automaton",
    "AutomatonError",
    "boolean_family",
    "build",
    "canonical_family",
    "check_nested_retracts",
    "check_rees_retract",
    "complements",
    "compose_phi",
    "Congruence",
    "CongruenceLattice",
    "ConstructionSpec",
    "dilation_base",
    "direct_sum_components",
    "direct_sum_family",
    "find_isomorphism",
    "format_automaton",
    "format_spec",
    "generated",
    "ideals",
    "is_boolean_type",
    "is_congruence",
    "is_homomorphism",
    "is_partial_homomorphism",
    "is_retractable",
    "is_semi_connected",
    "is_strongly_connected",
    "is_strongly_trap_connected",
    "join",
    "kernel",
    "kernel_of_map",
    "lattice_class",
    "lift_family_through_dilation",
    "meet",
    "parse_automaton",
    "parse_spec",
    "partial_derived",
    "PartialAutomaton",
    "principal_factor",
    "quotient",
    "recover_spec",
    "rees",
    "retract_homomorphisms",
    "RetractFamily",
    "run",
    "StateMap",
    "subautomata",
    "Subautomaton",
    "traps",
    "TreePoset",
    "validate_spec",
]
