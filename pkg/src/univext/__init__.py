"""Universal extensions and the torsion-pair equivalence perp(T)/[T] ~ E.

Computations run in two Krull-Schmidt categories with closed-form Hom and Ext:
representations of linearly oriented A_n and rank-r tubes. Every closed form is
cross-checked against matrix representations over GF(p).
"""
from .category import DomainError, Indec, LinearA, Tube, interval, parse_indec
from .equivalence import (
    NotStabilized,
    functor_F,
    functor_c,
    perp_ext,
    quotient_hom,
    script_e,
    verify_equivalence,
    verify_ff_corollary,
    verify_lwc_triple,
)
from .extensions import admits_universal_extension, minimal_universal_extension
from .torsion import (
    Membership,
    TorsionPair,
    TubeCase1,
    TubeCase2,
    enumerate_torsion_pairs,
    explicit_pair,
    membership,
    verify_torsion_pair,
)

__version__ = "0.1.0"
