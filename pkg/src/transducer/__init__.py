from src.transducer.algebra import compose, evaluate_point, image, invert, is_injective, state_image
from src.transducer.nucleus import (
    AXIOMS,
    AxiomVerdict,
    NucleusSet,
    nucleus_of,
    recurrent_states,
    verify_nucleus_of_injections,
)
from src.transducer.rational import Entry, RationalMap, evaluate, is_identity, local_action, maps_equal
from src.transducer.state import RawMachine, StateMap, canonicalize, states_equal

__all__ = [
    "AXIOMS",
    "AxiomVerdict",
    "Entry",
    "NucleusSet",
    "RationalMap",
    "RawMachine",
    "StateMap",
    "canonicalize",
    "compose",
    "evaluate",
    "evaluate_point",
    "image",
    "invert",
    "is_identity",
    "is_injective",
    "local_action",
    "maps_equal",
    "nucleus_of",
    "recurrent_states",
    "state_image",
    "states_equal",
    "verify_nucleus_of_injections",
]
