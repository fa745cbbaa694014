"""homlab: a desk-scale laboratory for homogeneous finite structures.

Library plus the ``homlab`` CLI: homogeneity and tuple-regularity testing,
amalgamation-class verification and limit approximation, computable
random-graph oracles, sum-free-set experiments, order reducts and switching,
and rigid tournament/C-relation superpositions.
"""

__version__ = "0.1.0"

from .core import (
    FiniteGraph,
    PartialIsomorphism,
    PermGroupDescription,
    RelationalStructure,
    Signature,
    are_isomorphic,
    automorphisms,
    canonical_code,
    induced_substructure,
    orbits_on_ktuples,
)

__all__ = [
    "FiniteGraph",
    "PartialIsomorphism",
    "PermGroupDescription",
    "RelationalStructure",
    "Signature",
    "are_isomorphic",
    "automorphisms",
    "canonical_code",
    "induced_substructure",
    "orbits_on_ktuples",
    "__version__",
]
