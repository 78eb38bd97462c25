"""Boolean automata networks: dynamics, synchronism sensitivity, XOR circulant networks."""

from .dynamics import Mode, attractors, build_graph, trajectory
from .formula import TruthTable, classify_monotony, compile, parse_formula
from .network import Network, format_config, parse_config

__all__ = [
    "Mode", "Network", "TruthTable", "attractors", "build_graph", "classify_monotony",
    "compile", "format_config", "parse_config", "parse_formula", "trajectory",
]
