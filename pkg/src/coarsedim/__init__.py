"""Proper norms on countable abelian groups, explicit cover witnesses for
asymptotic dimension, and exact checks of the metric inequalities behind them."""

from .exact import (
    DomainError,
    LogLinearValue,
    MalformedInput,
    Ordering,
    PAdicValue,
    format_rational,
    padic_valuation,
    parse_rational,
)
from .groups import (
    DirectSumCyclic,
    DyadicRationals,
    FiniteCyclic,
    GroupSpec,
    Homomorphism,
    Integers,
    Pruefer,
    Rationals,
    RationalsModZ,
    natural_projection,
    pruefer_projection,
)
from .norms import (
    ExceedsBudget,
    InducedNorm,
    NotProper,
    PNorm,
    QNorm,
    QuotientNorm,
    WeightFunction,
    WordNorm,
    ball_enumerate,
    distance,
    dyadic_weights,
    induced_norm,
    p_norm,
    q_norm,
    quotient_norm,
)
from .covers import (
    CoverFamilySpec,
    ExceedsCap,
    NotLocallyFinite,
    VerificationReport,
    chain_components,
    coset_cover,
    interval_cover_Q,
    net_point,
    subgroup_closure,
    ultrametric_cover,
    verify_cover,
)
from .coarse import (
    OutsideDomain,
    ball_inclusion,
    bornologous_profile,
    check_sandwich,
    closeness,
    distance_distortion,
)
from .dyadic_graph import MetricGraph, build_graph, compare_metrics, graph_distance
from .samples import grid, padic_grid, random_rationals

__version__ = "0.1.0"
