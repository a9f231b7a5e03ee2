"""Exact p-adic and character arithmetic."""
from .arith import INF, vp, euler_phi, legendre, residue, unit_part, smallest_nonresidue, is_square_in_Qp
from .characters import (
    ConductorBoundError,
    FiniteAbelianPresentation,
    FiniteCharacter,
    RootOfUnity,
    all_characters,
    char_conductor,
    char_order,
    galois_conjugate,
)
from .unit_groups import (
    UnitGroup,
    base_character,
    base_units,
    extension_units,
    norm_character,
    ramified_units,
    restrict_to_base,
    transport_base_character,
    unramified_units,
)
