"""msrlab: a finite-field laboratory for linear MSR array codes.

Verifies MDS and optimal-repair (interference-alignment) properties of
{n = k + r, k, l} systematic array codes, builds linear-independence
certificates on verified instances, evaluates systematic-length bounds
exactly, and searches tiny parameter spaces for valid codes.
"""

from . import errors
from .bounds import BoundReport, DimBounds, bound_grid, dim_lower_bound, evaluate_bounds
from .certificates import (
    DeltaFamilyReport,
    DimProfileReport,
    IndependenceReport,
    Partition,
    SpanningSizeReport,
    delta,
    delta_family_certificate,
    dim_profile,
    encoding_independence,
    find_partition,
    gamma,
    min_spanning_size,
)
from .code import (
    Code,
    CodeParams,
    MdsReport,
    encode,
    erasure_decode,
    mds_check,
    normalize,
)
from .codefile import (
    format_code_file,
    parse_code_file,
    read_code_file,
    write_code_file,
)
from .field import DEFAULT_MODULI, FieldSpec, default_modulus, field_inverse, is_prime
from .matrix import (
    Matrix,
    mat_inverse,
    mat_mul,
    mat_rank,
    mat_vec,
    represent_rows,
    solve_square,
    vectorize,
    vstack,
)
from .repair import (
    RepairResult,
    RepairScheme,
    VerifyReport,
    Violation,
    node_contents,
    repair_node,
    verify_scheme,
)
from .search import (
    MaxKReport,
    SearchConfig,
    SearchResult,
    estimate_exhaustive_candidates,
    max_feasible_k,
    pair_encoding,
    search_codes,
)
from .subspace import Relation, Subspace, full_space, is_direct_sum, span, sum_all

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Code",
    "CodeParams",
    "DEFAULT_MODULI",
    "DeltaFamilyReport",
    "DimBounds",
    "DimProfileReport",
    "FieldSpec",
    "IndependenceReport",
    "Matrix",
    "MaxKReport",
    "MdsReport",
    "Partition",
    "Relation",
    "RepairResult",
    "RepairScheme",
    "SearchConfig",
    "SearchResult",
    "SpanningSizeReport",
    "Subspace",
    "VerifyReport",
    "Violation",
    "bound_grid",
    "default_modulus",
    "delta",
    "delta_family_certificate",
    "dim_lower_bound",
    "dim_profile",
    "encode",
    "encoding_independence",
    "erasure_decode",
    "errors",
    "estimate_exhaustive_candidates",
    "evaluate_bounds",
    "field_inverse",
    "find_partition",
    "format_code_file",
    "full_space",
    "gamma",
    "is_direct_sum",
    "is_prime",
    "mat_inverse",
    "mat_mul",
    "mat_rank",
    "mat_vec",
    "max_feasible_k",
    "mds_check",
    "min_spanning_size",
    "node_contents",
    "normalize",
    "pair_encoding",
    "parse_code_file",
    "read_code_file",
    "repair_node",
    "represent_rows",
    "search_codes",
    "solve_square",
    "span",
    "sum_all",
    "vectorize",
    "verify_scheme",
    "vstack",
    "write_code_file",
]
