"""Exact NPT certification of reduced symmetric Dicke states."""

from .dicke_algebra import (
    BipartiteSymmetricOperator,
    ReducedDickeState,
    bipartite_operator,
    embed_dense,
    partial_transpose,
    reduced_state,
    schmidt_coefficient,
    schmidt_decomposition,
)
from .multiindex import (
    IndexSet,
    enumerate_full,
    enumerate_restricted,
    multinomial,
    qubit_bounds,
)
from .npt_witness import (
    CertificationReport,
    HermitianForm2,
    WitnessChoice,
    certify,
    choose_witness,
    discriminant,
    hermitian_form,
    optimal_amplitudes,
    spectral_min,
    two_factor_check,
    witness_sandwich,
)

__version__ = "0.1.0"
