"""Anyon models, ladder operators, observable decomposition and Hubbard spectra."""

from ._core import (
    LadderSet,
    Model,
    NotExpressibleError,
    NotLocalError,
    NotObservableError,
    builtin_names,
    decompose,
    fock_words,
    hubbard_hamiltonian,
    hubbard_spectrum,
    kernel_dimension,
    closure_dimension,
    verify_relations,
)

__all__ = [
    "LadderSet",
    "Model",
    "NotExpressibleError",
    "NotLocalError",
    "NotObservableError",
    "builtin_names",
    "decompose",
    "fock_words",
    "hubbard_hamiltonian",
    "hubbard_spectrum",
    "kernel_dimension",
    "closure_dimension",
    "verify_relations",
]
