"""Pseudo-spectral solvers comparing sharp and smooth dealiasing filters.

The package pairs a 1-D Burgers solver (with an implicit-solution oracle for
exact error reports) and a 3-D incompressible Euler solver in vorticity form
with a shared spectral core. Both solvers run under either the sharp 2/3-rule
cutoff or a 36th-order exponential smoothing profile, so the two dealiasing
strategies can be compared head to head on nearly singular flows.
"""

from .burgers import (
    BurgersOutput,
    BurgersRunState,
    ErrorReport,
    InitialCondition1D,
    SpectrumReport,
    burgers_rhs,
    exact_solution,
    initial_condition_by_name,
    inverse_sqrt_ic,
    run_burgers,
    shock_time,
    sine_ic,
    step_rk3,
)
from .diagnostics import (
    ContourLine,
    DiagnosticRecord,
    GrowthComparison,
    compute_record,
    contour_slice,
    energy_spectrum,
    enstrophy_spectrum,
    growth_comparison,
    stretching_diagnostic,
)
from .errors import (
    ConfigError,
    InstabilityError,
    IntegrityError,
    NoShockError,
    OracleError,
    SolverError,
    StagnationError,
)
from .euler import (
    SolverConfig,
    TubeParams,
    VorticityState,
    adaptive_dt,
    curl,
    divergence_residual,
    euler_rhs,
    make_tube_initial_data,
    project_divergence_free,
    run_euler,
    step_rk4,
    velocity_max,
    vorticity_to_velocity,
)
from .filters import (
    FilterKind,
    FourierFilter,
    exponential_smoothing,
    filter_by_name,
    filter_value,
    sharp_two_thirds,
)
from .runner import (
    DEFAULT_CONFIG,
    config_hash,
    load_config,
    resolve_config,
    run_experiment,
    verify_run,
    write_manifest,
)
from .spectral import (
    Field,
    Space,
    SpectralGrid,
    apply_filter,
    derivative_symbol,
    filter_field,
    forward_transform,
    inverse_transform,
    spectral_derivative,
)
from .storage import (
    DIAGNOSTIC_COLUMNS,
    DiagnosticsWriter,
    read_checkpoint,
    sha256_file,
    write_checkpoint,
    write_diagnostics,
)

__version__ = "0.1.0"
