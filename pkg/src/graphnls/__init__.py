"""Ground states of the NLS energy with a compactly supported potential on metric graphs."""

from .criteria import (
    CriterionReport,
    MassWindow,
    NonexistenceReport,
    assumption_h,
    candidate_large_mass,
    candidate_small_mass,
    existence_criterion,
    large_mass_site,
    nfork_build,
    nfork_window,
    nonexistence_condition,
    small_mass_inequality,
)
from .errors import *  # noqa: F401,F403
from .functional import (
    EnergyBreakdown,
    Exponents,
    SolitonParams,
    energy,
    gn_linf_check,
    holder_check,
    kinetic,
    mass,
    mass_parametrized_energy,
    rescale,
    soliton,
    soliton_energy_threshold,
    soliton_params,
)
from .graph import (
    CompactCore,
    GraphFunction,
    Mesh,
    MetricGraph,
    PotentialField,
    build_graph,
    build_mesh,
    compact_core,
    curvature_potential,
    halfline_graph,
    line_graph,
    sample_potential,
    star_graph,
    two_bridge_graph,
)
from .rearrange import IntervalFunction, monotone_rearrangement, polya_szego_check
from .scan import Problem, RowClass, ScanRow, scan_mass
from .solver import FlowParams, SolveReport, discrete_energy_gradient, multistart_minimize, normalized_gradient_flow
from .specfile import load_spec, parse_spec

__version__ = "0.1.0"
