"""Exact reasoning over finite causal spaces.

Build a space from primitive events and a causal table, then ask for
beliefs, interventional beliefs and Bayesian posteriors as exact fractions.
"""

from .belief import (
    DiagnosticsReport,
    HypothesisSet,
    PosteriorVector,
    bayes_posterior,
    belief,
    belief_do,
    expected_log_posterior,
    is_measurable,
    mass,
    posterior_log_decomposition,
    sequential_posterior,
)
from .causal import (
    CausalSpace,
    CausalTable,
    Literal,
    PrimitiveSequence,
    atom_mass,
    build_causal_space,
    cause,
    intervene,
    intervene_composite,
    validate_primitive_sequence,
)
from .events import (
    Event,
    Partition,
    TruthValue,
    Universe,
    algebra_contains,
    generate_atoms,
    truth,
)

__version__ = "0.1.0"
