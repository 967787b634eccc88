"""Evaporation of an entangled black hole: exact Haar-random simulation,
closed-form purities, decoupling bounds and correlation curves."""

from .analytics import (
    PurityTable,
    Thresholds,
    correlation,
    curve,
    decoupling_rhs,
    excess_qubits,
    fidelity_floor,
    pure_model_bound,
    purity_table,
    thresholds,
)
from .errors import (
    BudgetError,
    CapacityError,
    DimensionMismatchError,
    InconsistentParametersError,
    LabelCollisionError,
    ModelError,
    UnknownLabelError,
)
from .haar import SeededStream, sample_haar, twirl_swap_coefficients, twirled_swap_mc
from .model import (
    Explicit,
    ModelParams,
    Uniform,
    build_decoder_and_fidelity,
    build_initial_state,
    cascaded_infall,
    decoupling_fidelity,
    evaporate,
    evaporation_record,
    radiate,
)
from .tensor import (
    DensityOp,
    PureState,
    SpaceLayout,
    UnitaryMatrix,
    fidelity,
    partial_trace,
    purity,
    trace_distance,
    von_neumann_entropy,
)

__version__ = "0.1.0"
