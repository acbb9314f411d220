"""Z_N quantum double lattice models with dislocation defects and gapped
boundaries, checked by exact Weyl-word algebra and small dense oracles."""

__version__ = "0.1.0"

from .group import GroupSpec
from .lattice import Lattice, Site, build_lattice, build_planar, build_torus, insert_dislocation
from .stabilizers import assemble, check_commutation, ground_space_dimension
from .weyl import WeylWord, commutator_phase

__all__ = [
    "GroupSpec", "Lattice", "Site", "WeylWord", "assemble", "build_lattice", "build_planar",
    "build_torus", "check_commutation", "commutator_phase", "ground_space_dimension",
    "insert_dislocation",
]
