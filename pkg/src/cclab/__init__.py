"""Numeric potential-theory toolkit for corner Cantor sets under the
1/2-heat kernel: generation geometry, kernel potentials with hierarchical
summation, two-sided capacity bounds, Hausdorff-content brackets, and
BMO/Lip_alpha seminorm probes."""

from .capacity import (
    CapacityBounds,
    InconclusiveError,
    bounds,
    default_tol,
    lower_bound,
    upper_bound_onesided,
    upper_bound_sym,
)
from .content import ContentBracket, content_bracket, content_lower, content_upper
from .geometry import (
    CantorSpec,
    Cube,
    Generation,
    SpecError,
    build_generation,
    generation_from_json,
    generation_to_json,
    reflected,
    scaled,
    side_length,
    theta,
    theta_sum,
    time_reflected,
    translated,
)
from .kernels import (
    SingularityError,
    estimate_cz_constant,
    eval_P,
    eval_Psym,
    eval_Pstar,
    kernel_values,
)
from .measure import (
    AtomicMeasure,
    CubeUnionMeasure,
    GrowthError,
    frostman_rescale,
    growth_constant,
    measure_of_cube,
    segment_measure,
    uniform_on_generation,
)
from .potential import (
    EngineError,
    ExtremumReport,
    PotentialValue,
    inf_potential_on_set,
    potential_direct,
    potential_tree,
    sup_potential,
)
from .regularity import SeminormReport, bmo_estimate, lip_alpha_estimate

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
