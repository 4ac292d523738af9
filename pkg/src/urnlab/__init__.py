"""Balanced multicolor urn models with multiple drawings.

Four sampling schemes are supported: unordered samples without (``M``) and
with (``R``) replacement, and their ordered counterparts ``MSEQ`` and
``RSEQ``.
"""

from urnlab.combinatorics import (
    enumerate_sequences,
    enumerate_simplex,
    falling_factorial,
    multinomial,
    multiplicity_vector,
)
from urnlab.conformance import conform
from urnlab.exact import (
    ExactDistribution,
    MomentState,
    covariance_recurrence,
    eigen_report,
    enumerated_moments,
    evolve_distribution,
    iter_distributions,
    mean_product_formula,
    moment_trajectory,
)
from urnlab.io import load_bundled, load_model
from urnlab.model import (
    LinearVerdict,
    ReducedMatrix,
    ReplacementMatrix,
    Scheme,
    UrnModel,
    build_linear_unordered,
    build_m1_embedding,
    classify,
    classify_ordered,
    classify_unordered,
    embed_unordered_to_ordered,
    validate_balance,
    validate_tenability,
)
from urnlab.montecarlo import SimulationPlan, run_ensemble, run_path
from urnlab.sampling import SampleLaw, draw_sample, prob_ordered, prob_unordered, rng_stream

__version__ = "0.1.0"
