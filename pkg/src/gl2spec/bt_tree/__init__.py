"""Bruhat-Tits tree engine with orbital integrals and constant terms."""
from .tree import (
    RadiusError,
    RationalMatrix,
    TreeContext,
    TreeVertex,
    apply,
    ball,
    count_paths,
    dist_to_standard_apartment,
    fixed_segment_count,
    fixed_set,
    fixes_translated_segment,
    fixes_vertex,
    in_z_gamma0,
    neighbors,
    origin,
    standard_segment,
    vertex_distance,
    vertex_of,
)
from .integrals import (
    DiagonalConstantTerm,
    GlobalEnvelope,
    central_constant_term,
    central_constant_term_by_tree,
    central_constant_term_shell_sum,
    constant_term_diagonal,
    coset_constant_term,
    diagonal_orbital_integral_by_tree,
    gamma0_volume,
    global_diagonal_envelope,
    is_elliptic,
    orbital_integral_gamma0,
    shell_sum_as_printed,
)
