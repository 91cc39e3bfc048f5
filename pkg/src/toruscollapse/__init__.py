"""Collapsing constructions and rate functionals on the torus."""

from .lattice import (
    OrderedTuple,
    PointConfig,
    TorusConfig,
    TorusInterval,
    class_label_decode,
    class_label_encode,
    discrete_excess,
    validate_ordered,
)
from .measures import (
    ClosedArc,
    CumulativeFunction,
    PlateauDecomposition,
    TorusMeasure,
    concave_envelope,
    cumulative,
    envelope_density,
    measure_leq,
    plateau_set,
)
from .collapse import (
    CollapseError,
    FluxProfile,
    JInterval,
    collapse_discrete,
    collapse_discrete_algorithmic,
    collapse_discrete_flux,
    collapse_k,
    collapse_measure,
    collapse_points,
    commutation_check,
    flux_profile,
)

__version__ = "0.1.0"
