"""Bipartite coherence bookkeeping and the search for maximal coherence loss
under local projective measurements."""
from ._backend import BACKEND
from .errors import (
    ConvergenceError,
    DimensionError,
    InvalidStateError,
    NotHermitianError,
    PreconditionError,
)
from .linalg import (
    MAX_DIM,
    EigenDecomposition,
    eig_hermitian,
    make_rng,
    partial_trace,
    random_ginibre,
    random_unitary,
    split_rng,
    tensor,
    unitary_from_generator,
)
from .measurement import (
    MubFamily,
    ProjectiveBasis,
    computational_basis,
    dual_basis_qubit,
    mub_basis,
    mub_collapse_check,
    mub_family,
    project_local,
    verify_unbiased,
)
from .measures import (
    MeasureKind,
    abs_sum,
    block_additivity_check,
    c_l1,
    c_relent,
    coherence,
    dephase,
    direct_sum,
)
from .search import (
    LossObjective,
    SearchOutcome,
    coherence_loss,
    qi_scan,
    search_grid_qubit,
    search_random,
    search_simplex,
)
from .states import (
    DensityMatrix,
    Ensemble,
    counterexample_ensemble,
    counterexample_state,
    maximally_coherent,
    maximally_mixed,
    preset,
    qi_state,
    random_density,
    random_qi,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "DimensionError",
    "InvalidStateError",
    "NotHermitianError",
    "PreconditionError",
    "MAX_DIM",
    "EigenDecomposition",
    "eig_hermitian",
    "make_rng",
    "partial_trace",
    "random_ginibre",
    "random_unitary",
    "split_rng",
    "tensor",
    "unitary_from_generator",
    "MubFamily",
    "ProjectiveBasis",
    "computational_basis",
    "dual_basis_qubit",
    "mub_basis",
    "mub_collapse_check",
    "mub_family",
    "project_local",
    "verify_unbiased",
    "MeasureKind",
    "abs_sum",
    "block_additivity_check",
    "c_l1",
    "c_relent",
    "coherence",
    "dephase",
    "direct_sum",
    "LossObjective",
    "SearchOutcome",
    "coherence_loss",
    "qi_scan",
    "search_grid_qubit",
    "search_random",
    "search_simplex",
    "DensityMatrix",
    "Ensemble",
    "counterexample_ensemble",
    "counterexample_state",
    "maximally_coherent",
    "maximally_mixed",
    "preset",
    "qi_state",
    "random_density",
    "random_qi",
    "validate",
    "__version__",
]
