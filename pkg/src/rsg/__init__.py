from src.rsg.cycles import CycleMultiset, KernelBasis, decompose, del1, hilbert_basis, ker_del1_generators
from src.rsg.element import (
    RsgElement,
    classification_element,
    nucleus_extension,
    rsg_compose,
    rsg_equal,
    rsg_invert,
    rsg_is_identity,
    rsg_membership,
    rsg_power,
    witness_tuple_map,
)
from src.rsg.generators import (
    NormalishForm,
    NuclearGenerator,
    conjugate_generator,
    model_nuclear_generator,
    normalish_form,
    recognize_normalish,
)
from src.rsg.germs import coset_exponent, germs_agree, lambda_map, periodic_states

__all__ = [
    "CycleMultiset",
    "KernelBasis",
    "NormalishForm",
    "NuclearGenerator",
    "RsgElement",
    "classification_element",
    "conjugate_generator",
    "coset_exponent",
    "decompose",
    "del1",
    "germs_agree",
    "hilbert_basis",
    "ker_del1_generators",
    "lambda_map",
    "model_nuclear_generator",
    "normalish_form",
    "nucleus_extension",
    "periodic_states",
    "recognize_normalish",
    "rsg_compose",
    "rsg_equal",
    "rsg_invert",
    "rsg_is_identity",
    "rsg_membership",
    "rsg_power",
    "witness_tuple_map",
]
