"""Exact finite-field workbench for matrix rigidity and linear data structures."""
__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FormatError,
    InnerTooSmall,
    InternalVerificationFailed,
    NoSolution,
    NotACover,
    NotComputingM,
    PreconditionViolated,
    RankDeficient,
    RigxError,
    UnsupportedKind,
)
from .gfmat import (
    FieldMatrix,
    SubspaceBasis,
    distance_to_subspace,
    enumerate_subspaces,
    extend_to_basis,
    read_matrix,
    rref,
    solve_right,
    write_matrix,
)
from .dims import AboveMax, DimWitness, SparseGenerator, enumerate_sparse_generators, inner_dimension, outer_dimension
from .rigidity import (
    RigidityCertificate,
    StrongRigidity,
    global_rigidity_threshold,
    lemma11_check,
    refutation_inner_dim_check,
    row_rigidity_threshold,
    strong_row_rigidity,
)
from .dscore import (
    Evasive,
    LinearDS,
    SumsetWitness,
    counting_lower_search,
    counting_upper_ds,
    cover_from_ds,
    ds_from_cover,
    linearize,
    sumset_evasive_bruteforce,
    verify_ds,
)
from .extract import (
    Cover,
    Decomposition,
    RigidSubmatrix,
    aux_decompose,
    ds_lower_to_rigid,
    find_rigid_submatrix,
    succinct_schedule_run,
)
from .amplify import LinearLDC, apply_ldc, hadamard_ldc, ldc_span_check, stack_square
from .codes import CodeSpec, build_code, friedman_matrix
