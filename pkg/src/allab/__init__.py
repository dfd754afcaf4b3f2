"""Finite lattices with complementation whose Sasaki operations form an adjoint pair."""

from .lattice import (
    ClassifierFlags,
    FiniteLattice,
    LatticeError,
    NoBounds,
    NotALattice,
    PartialUnary,
    UnknownLabel,
    all_complementations,
    build_from_covers,
    classify,
    direct_product,
    is_isomorphic,
)
from .sasaki import (
    check_adjoint,
    check_complement_forcing,
    check_conditions,
    is_member_of_V,
    sasaki_product,
    sasaki_residual,
)

__version__ = "0.1.0"
