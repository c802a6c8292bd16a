"""Minimum-error discrimination with postmeasurement information on bipartite
systems, with certificates for when that information annihilates or creates
nonlocality."""

from .cones import (
    Cone,
    ConeVerdict,
    Confidence,
    Status,
    in_psd,
    in_sep_star,
    is_ew,
    min_product_expectation,
    positive_part_split,
)
from .discrim import (
    DiscriminationResult,
    helstrom_two,
    pi_success_probability,
    pi_values,
    pi_witness_lower_bound,
    psd_dominant_index,
    sep_star_dominant_index,
    solve_me,
    trivial_strategy,
    witness_strategy,
)
from .ensembles import (
    PiContext,
    StateEnsemble,
    bell_fixtures,
    build_example1,
    build_example2,
    build_example3,
    build_example4,
    make_pi_context,
    phi_plus_pt,
    projector,
)
from .hermlin import (
    HermitianOperator,
    UnitVector,
    ValidationError,
    eig_hermitian,
    inner,
    partial_contraction_a,
    partial_contraction_b,
    partial_transpose,
    tensor,
    trace_norm,
)
from .pianalysis import (
    Classification,
    PiReport,
    PreconditionError,
    TheoremCertificate,
    Tri,
    check_theorem1,
    check_theorem2,
    check_theorem3_premises,
    check_theorem4_premises,
    classify,
)
from .simulate import SimulationResult, simulate

__version__ = "0.1.0"
