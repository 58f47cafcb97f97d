"""Vector-space interference alignment for the three-user M x N MIMO
interference channel: feasibility, explicit constructions and rank
certificates."""

from .alignment import (
    AlignmentMatrix,
    AlignmentPath,
    ConverseCertificate,
    build_Ar,
    check_path,
    converse_certificate,
    exact_rank_specialized,
    kernel_of_Ar,
    to_paths,
)
from .channels import (
    ChannelSet,
    SystemParams,
    generate_channels,
    read_channels,
    specialized_channels,
    transpose_dual,
    write_channels,
)
from .construct import (
    AlignmentSolution,
    construct,
    construct_critical,
    construct_eigen,
    construct_general,
    dual_solution,
)
from .errors import (
    ChannelFileError,
    DegeneracyError,
    DegeneracyWarning,
    DimensionMismatchError,
    IAError,
    InfeasibleError,
    PreconditionError,
)
from .feasibility import (
    UNBOUNDED,
    FeasibilityVerdict,
    RegionCell,
    critical_feasible,
    equation_count_bound,
    is_feasible,
    max_path_length,
    region_sweep,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    ToleranceConfig,
    eigenpairs,
    kernel_basis,
    orth_complement,
    projection_rank,
    rank,
    subspace_distance,
)
from .verify import VerifyReport, interference_profile, verify

__version__ = "0.1.0"
