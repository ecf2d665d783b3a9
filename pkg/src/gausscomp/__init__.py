"""Monte Carlo library for interpolated Gaussian comparison functionals.

Estimates the softmax (free-energy) functional bridging a Gaussian-matrix
process at t=1 and a decoupled surrogate at t=0, its t-derivative via two
independent formulas, reconstructs curves by quadrature, and checks the
max / minmax / lifted comparison inequalities recovered in the large-beta
limit.  See the README for the CLI and the acceptance suite.
"""

from .errors import (
    AggregationError,
    DegenerateDirectionError,
    EndpointSingularityError,
    GausscompError,
    ReplicationSkip,
    SkipBudgetError,
    UnknownIdentityError,
    ValidationError,
    VariantMismatchError,
)
from .estimators import (
    STANDARD_T_WINDOW,
    DerivativeRoute,
    IbpResult,
    dpsi_computed,
    dpsi_standard,
    ibp_suite,
    psi_direct,
    verify_ibp,
)
from .fixtures import ReferenceTable, fixture, reference, table_ids
from .identities import identity_ids
from .limits import (
    BoundDirection,
    BoundReport,
    adjusted_value,
    chain_bound_check,
    interpolated_max,
    lifted_bound_check,
    lifted_exp_functional,
    slepian_gordon_check,
)
from .model import (
    InterpolationState,
    ModelParams,
    ReplicationDraw,
    Variant,
    VectorSet,
    build_set,
    interpolation_state,
    load_set,
    make_params,
    mixed_overlap,
    save_set,
)
from .quadrature import (
    CurveResult,
    MonotonicityReport,
    Trend,
    integrate_curve,
    monotonicity_check,
    uniform_grid,
)
from .reproduce import CellCheck, TableRun, run_table
from .sampling import (
    GENERATOR_NAME,
    DrawBatch,
    Estimate,
    SeedPlan,
    aggregate,
    evaluate_grid,
    generate_draws,
    paired_run,
    replication_stream,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
