"""Interference alignment for three-cell constant MIMO uplinks.

Constructs and verifies transmit precoders that align inter-cell
interference into a (2K-1)d-dimensional subspace at each base station,
plus the cascaded zero-forcing receivers that recover 3Kd total streams.
"""

from .alignment import (
    FeasibilityVerdict,
    Method,
    PrecoderSolution,
    check_feasibility,
    design_precoders,
    design_precoders_eigen,
    design_precoders_nullspace,
    interference_dimension,
)
from .errors import (
    ConfigurationError,
    DegenerateChannelError,
    DegenerateSpanError,
    DimensionMismatchError,
    FeasibilityError,
    IA3Error,
    InvalidInputError,
    NumericalFailureError,
)
from .metrics import (
    AlignmentReport,
    DofSweepRow,
    best_ia_dof_for_M,
    dof_sweep,
    fit_slope,
    orthogonal_dof,
    rank_distribution,
    run_trial,
    sum_rate,
    sum_rate_curve,
)
from .network import (
    ChannelSet,
    NetworkConfig,
    channels_from_json,
    channels_to_json,
    combine_channels,
    generate_channels,
    stacked_interference_matrix,
)
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    general_eig,
    left_null_basis,
    numerical_rank,
    right_null_basis,
    span_dimension,
    spans_equal,
)
from .receiver import (
    ReceiverSolution,
    design_ici_eliminator,
    design_iui_eliminator,
    design_receivers,
    effective_channel,
    end_to_end_leakage,
)

__version__ = "0.1.0"
