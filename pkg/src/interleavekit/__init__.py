"""Exact interleaving distances, gadget reductions and isomorphism tests
for finite persistence modules over prime fields."""
from .errors import (
    DimensionMismatchError,
    EnumerationCapError,
    FieldMismatchError,
    FormatError,
    InterleaveKitError,
    InvalidIntervalError,
    InvalidModuleError,
    OrderError,
    PosetMismatchError,
)
from .fields import GF2, GF3, FieldMatrix, PrimeField, mat_inverse, mat_mul, mat_rank, solve_affine
from .kernels import BACKEND
from .posets import GridPoset, LCPoset, line
from .modules import (
    Interval,
    VecModule,
    change_basis,
    direct_sum,
    interval_module,
    is_interval,
    range_interval_module,
    shift,
    transition,
    validate_module,
    zero_module,
)
from .barcode import Barcode, RankInvariant, barcode, rank_invariant, realize
from .bottleneck import (
    bottleneck_distance,
    delta_matching_exists,
    interleaving_distance_1d,
    intervals_delta_interleaved,
    is_eps_trivial,
)
from .solver import (
    HomSpace,
    InterleavingWitness,
    are_isomorphic,
    hom_space,
    interleaving_distance,
    is_delta_interleaved,
    verify_witness,
)
from .ci import (
    CIProblem,
    CISolution,
    char_family,
    ci_solve_bruteforce,
    ci_solve_matching,
    ci_to_modules,
    is_solution,
)
from .sat import CNFFormula, decide_sat_via_interleaving, parse_dimacs, sat_bruteforce, sat_to_modules
from .setmods import (
    SetModule1D,
    SetModule2D,
    merge_iso,
    merge_tree_of,
    multigraph_iso,
    setmod2_iso,
    setmod2_to_multigraph,
    tree_canonical_code,
)

__version__ = "0.1.0"
