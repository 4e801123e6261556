"""Lateral bumps in Schensted insertion and the vanishing diagonal of RSK blocks."""

__version__ = "0.1.0"

from .bitableau import (
    BlockMatrix,
    MinorSpec,
    SparsePoly,
    bitableau,
    block,
    coefficient,
    diagonal_entry,
    diagonal_zero_census,
    minor_poly,
    rsk_entry,
)
from .census import (
    CensusRow,
    TreeLevel,
    census_direct,
    census_tree,
    verify_children_bound,
    verify_inverse_size,
    verify_restriction,
)
from .core import (
    Biword,
    ExponentMatrix,
    MarginPair,
    Partition,
    Tableau,
    biword,
    column_heights,
    enumerate_margin_matrices,
    matrix_of_permutation,
    permutation_of_matrix,
    weight,
    with_star,
)
from .insertion import (
    BumpEvent,
    BumpKind,
    InsertionTrace,
    children,
    children_in_V,
    flat,
    has_lateral_bump,
    phi,
    row_insert,
    rsk,
    schensted,
    shape_of,
)
from .plancherel import (
    TrialBatch,
    first_row_stat,
    gamma_point,
    lateral_fraction,
    same_height_check,
    sample_shape,
    shape_within,
    stirling_sequence,
    syt_count,
)
