"""Exact combinatorics of slope-level pairs on metric graphs.

Submodules, roughly in dependency order:

- :mod:`artifact.setfn`: set functions on a finite ground set, UpMin, base polytopes
- :mod:`artifact.graph`: multigraphs, ordered partitions, slope functions
- :mod:`artifact.residue`: residue spaces and the gamma, zeta and eta set functions
- :mod:`artifact.potential`: level functions recovered from slopes
- :mod:`artifact.cones`: cones of slope-level pairs, squashing and facets
- :mod:`artifact.bricks`: brick decomposition of the simplex
- :mod:`artifact.fans`: permissible pairs, per-brick fans and the canonical fan
- :mod:`artifact.qlinalg`: decomposed rational subspaces and their nu* tables
- :mod:`artifact.genus0`: differentials on rational components and their gluing
- :mod:`artifact.verify`: seeded property suites, also exposed as ``artifact verify``
"""

from .graph import Arrow, Multigraph, OrderedPartition, SlopeFunction, SlopeLevelPair
from .setfn import GroundSet, SetFunction, upmin

__all__ = [
    "Arrow",
    "GroundSet",
    "Multigraph",
    "OrderedPartition",
    "SetFunction",
    "SlopeFunction",
    "SlopeLevelPair",
    "upmin",
]
__version__ = "0.1.0"
