"""(min,+) matrix products and convolutions that exploit inputs
decomposable into few monotone or constant-valued subsequences.

The heavy lifting reduces to Boolean matrix products and Boolean
convolutions with extreme (first/last) witnesses; patience-style greedy
decompositions supply the monotone parts, and index-scaled shifts
monotonize arbitrary inputs at a known offset.
"""

from .boolmat import bool_matmul, mat_extreme_witness
from .convolution import (
    GroupPartition,
    conv_decomposed,
    conv_few_values,
    conv_naive,
    conv_shift_offsets,
    shift_transform_vectors,
    validate_group_partition,
    vector_monotone,
)
from .core import (
    ENTRY_BOUND,
    MAX_DIMENSION,
    NO_WITNESS,
    SHIFTED_ENTRY_BOUND,
    BoolMatrix,
    BoolVector,
    CoverageGapError,
    Decomposition,
    DimensionMismatch,
    DirectionViolation,
    IndexOutOfRange,
    IntMatrix,
    IntVector,
    LengthMismatch,
    MinPlusError,
    MinPlusOutput,
    MonotoneTag,
    OpCounters,
    OrderViolation,
    OverlapError,
    PrecisionWindowExceeded,
    Subsequence,
    UniformViolation,
    WitnessArray,
    checked_add,
    validate_decomposition,
    values_satisfy,
)
from .decompose import (
    DecompositionStats,
    char_vector,
    decompose_monotone_greedy,
    decompose_nondecreasing,
    decompose_nonincreasing,
    decompose_uniform,
    decomposition_stats,
    longest_strictly_decreasing_length,
    longest_strictly_increasing_length,
)
from .fastconv import bool_convolution, conv_extreme_witness, int_convolution
from .product import (
    cols_monotone,
    decompose_cols,
    decompose_rows,
    minplus_decomposed,
    minplus_few_values_product,
    minplus_mixed_uniform,
    minplus_naive,
    minplus_uniform_mixed,
    pad_decompositions,
    rows_monotone,
    shift_transform_matrices,
)

__version__ = "0.1.0"

__all__ = [
    "ENTRY_BOUND",
    "MAX_DIMENSION",
    "NO_WITNESS",
    "SHIFTED_ENTRY_BOUND",
    "BoolMatrix",
    "BoolVector",
    "CoverageGapError",
    "Decomposition",
    "DecompositionStats",
    "DimensionMismatch",
    "DirectionViolation",
    "GroupPartition",
    "IndexOutOfRange",
    "IntMatrix",
    "IntVector",
    "LengthMismatch",
    "MinPlusError",
    "MinPlusOutput",
    "MonotoneTag",
    "OpCounters",
    "OrderViolation",
    "OverlapError",
    "PrecisionWindowExceeded",
    "Subsequence",
    "UniformViolation",
    "WitnessArray",
    "bool_convolution",
    "bool_matmul",
    "char_vector",
    "checked_add",
    "cols_monotone",
    "conv_decomposed",
    "conv_extreme_witness",
    "conv_few_values",
    "conv_naive",
    "conv_shift_offsets",
    "decompose_cols",
    "decompose_monotone_greedy",
    "decompose_nondecreasing",
    "decompose_nonincreasing",
    "decompose_rows",
    "decompose_uniform",
    "decomposition_stats",
    "int_convolution",
    "longest_strictly_decreasing_length",
    "longest_strictly_increasing_length",
    "mat_extreme_witness",
    "minplus_decomposed",
    "minplus_few_values_product",
    "minplus_mixed_uniform",
    "minplus_naive",
    "minplus_uniform_mixed",
    "pad_decompositions",
    "rows_monotone",
    "shift_transform_matrices",
    "shift_transform_vectors",
    "validate_decomposition",
    "validate_group_partition",
    "values_satisfy",
    "vector_monotone",
    "__version__",
]
