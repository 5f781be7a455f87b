"""Legendre and stationary phase transforms of Puiseux germs."""
from .errors import *  # noqa: F401,F403
from .fourier import (
    TransformReport,
    check_stationary_phase,
    fourier_transform,
    inverse_fourier_transform,
)
from .io import load_data, dump_data, parse_germ, print_germ
from .kernels import BACKEND
from .legendre import (
    Admissibility,
    Case,
    LegendrePair,
    classify,
    defining_identity,
    inverse_legendre,
    invert_series,
    legendre_transform,
)
from .puiseux import (
    EPS_ZERO,
    INF,
    BasePoint,
    Comparison,
    DirectedGerm,
    Direction,
    PuiseuxGerm,
    compare_at,
    derive,
    evaluate,
    is_bounded,
    monodromy,
    mul,
    orbit_size,
    pole_order,
    same_class,
    sigma,
    stokes_directions,
)
from .stokes import (
    FactorOrbit,
    PointData,
    SingularityData,
    StokesStructure,
    filtration_rank,
    gr_rank,
    instantiate,
    stokes_structure,
    validate,
)

__version__ = "0.1.0"
