"""Closed-form convex geometry for the set equation ``C = (GC)°``.

Sets and cones with exact polars, gauges and support functions; constructive
solvers for positive definite, symmetric and one-dimensional operators; the
semi-skew obstruction; direction-sampled certificates; grid Legendre
transforms; and a gallery of worked examples.
"""
from .config import DEFAULT, RunConfig
from .errors import PolarfixError
from .polarity import Operator, polar, polarity_map, pushforward
from .sets import (
    Ball,
    ConeH,
    ConeV,
    Ellipsoid,
    Interval,
    LorentzCone,
    Orthant,
    PolytopeH,
    PolytopeV,
    classify,
    contains,
    gauge,
    rhombus,
    square,
    support,
)
from .solver import (
    classify_1d,
    iterate_polarity,
    semi_skew_decompose,
    solve,
    solve_positive_definite,
    solve_symmetric,
)
from .verify import verify_fixed_point

__version__ = "0.1.0"
