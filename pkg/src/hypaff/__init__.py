"""hypaff: piecewise affine hyperbolic maps on planar domains.

Structural checks (partition refinement, boundary crossing multiplicity),
numerical transversality certificates for admissible power series,
parameter gates for the absolutely-continuous-measure conditions, and
empirical physical measures with entropy and correlation diagnostics.
"""

__version__ = "0.1.0"

from .errors import (
    BoundaryError,
    CertificationError,
    DegeneracyError,
    EmptyRegionError,
    HypaffError,
    ParameterError,
    ResourceError,
    ValidationError,
)
from .geometry import (
    EPS_GEOM,
    Point,
    Polygon,
    Segment,
    affine_image,
    arrangement_multiplicity,
    intersect_polygons,
)
from .map_core import (
    GateReport,
    LiftedPoint,
    MapSpec,
    Orbit,
    PieceSpec,
    apply,
    gate_corollary,
    gate_theorem,
    lift_apply,
    mapspec_from_json,
    mapspec_to_json,
    orbit,
    preset_belykh,
    preset_fat_baker,
)
from .measure import (
    CorrelationReport,
    Density1D,
    EmpiricalMeasure,
    EntropyEstimate,
    Observable,
    UnstableCurve,
    conditional_slab_density,
    correlation_decay,
    entropy_estimate,
    estimate_sbr,
    invariance_gap,
    marginal,
)
from .partition import (
    A2Cert,
    A2Failure,
    Cell,
    Partition,
    check_A2,
    compute_D_tau,
    initial_partition,
    refine_once,
    refine_to_depth,
)
from .symbolic import (
    Word,
    WordCensus,
    enumerate_words,
    itinerary_of,
    separation_series,
    stable_coordinate,
)
from .transversality import (
    Q_N,
    SeriesSpec,
    TransversalityCert,
    compute_delta,
    corollary_interval_bound,
    eval_f_n,
    eval_h_n,
    verify_implication,
)

__all__ = [name for name in dir() if not name.startswith("_")]
