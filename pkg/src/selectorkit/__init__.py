"""Bijective-selector decompositions of set-valued maps and finite ballean representations."""

__version__ = "0.1.0"

from .core import (
    ComponentPartition,
    DegreeBounds,
    GroundSet,
    Permutation,
    Selector,
    SetValuedMap,
    apply,
    build_map,
    components,
    compose,
    degree_bounds,
    inverse_map,
    invert,
    is_symmetric,
    restrict,
    symmetrize,
    transposition,
)
from .decomposition import (
    ConflictGraph,
    Infeasible,
    MinimalFamily,
    SelectorFamily,
    VerificationReport,
    VertexColoring,
    conflict_graph,
    decompose,
    decompose_by_components,
    enumerate_bijective_selectors,
    greedy_color,
    min_family_oracle,
    verify_family,
)
from .ballean import (
    CoarseBase,
    Entourage,
    GeneratorSet,
    GSpaceRepresentation,
    MacroUniformWitness,
    ball,
    ball_set,
    compose_ent,
    ideal_closure_check,
    invert_ent,
    is_asymorphism,
    is_macro_uniform,
    orbit_entourage,
    represent,
    validate_base,
)
from .cellular import (
    ClosureResult,
    PartitionBase,
    PartitionEntourage,
    block_generators,
    cellular_checks,
    is_equivalence,
    orbit_base,
    partitions_from_base,
    represent_cellular,
    subgroup_closure,
)
