from src.cayley.atoms import Atom, AtomTree, atoms, nearest, nhat, visible
from src.cayley.ball import Ball, ball
from src.cayley.morphisms import (
    MorphismResult,
    Verdict,
    find_morphism,
    free_product_cone_check,
    morphism_check,
    morphism_group,
)
from src.cayley.oracle import (
    DehnOracle,
    FreeAbelianOracle,
    FreeGroupOracle,
    FreeProductOracle,
    GroupOracle,
    make_oracle,
)
from src.cayley.types import AddressSystem, TypeGraph, address_system, atoms_frame, type_graph

__all__ = [
    "AddressSystem",
    "Atom",
    "AtomTree",
    "Ball",
    "DehnOracle",
    "FreeAbelianOracle",
    "FreeGroupOracle",
    "FreeProductOracle",
    "GroupOracle",
    "MorphismResult",
    "TypeGraph",
    "Verdict",
    "address_system",
    "atoms",
    "atoms_frame",
    "ball",
    "find_morphism",
    "free_product_cone_check",
    "make_oracle",
    "morphism_check",
    "morphism_group",
    "nearest",
    "nhat",
    "type_graph",
    "visible",
]
