"""Synthetic network topologies from a degree sequence and a clustering target."""

__version__ = "0.1.0"

from .graph import Graph, GraphInputError, connected_components, new_graph
from .sampler import ExhaustedDistribution, ResidualDistribution
from .generators import (
    ALGORITHMS,
    RD_CHECKS,
    GenOutcome,
    GenParams,
    GeneratorInputError,
    close_triangle,
    edge_budget,
    generate,
    generate_sage,
    generate_siege,
    generate_synth,
    powerlaw_degree_sequence,
    triangle_target,
)
from .metrics import MetricReport, measure
from .epidemics import SirParams, SirTrace, run_sir
from .ingest import (
    DatasetProfile,
    load_graph,
    load_profile,
    parse_snap_edgelist,
    profile,
    save_graph,
    save_profile,
)
