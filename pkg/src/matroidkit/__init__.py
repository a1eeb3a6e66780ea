"""Finite matroid intersection, packing/covering and orientation toolkit.

All solvers emit certificates that are re-verified against raw
independence oracles; brute-force counterparts in :mod:`matroidkit.oracle`
provide the ground truth the test suite compares against.
"""

from .core import (
    CertificateInvalid,
    DemandOutOfRange,
    ElementSet,
    ExtensionFailed,
    GroundSet,
    InvalidDocument,
    InvalidInputPackCov,
    Matroid,
    MatroidKitError,
    NotCommonIndependent,
    NotDefined,
    OverlappingUniverses,
    PostconditionFailed,
    PreconditionViolated,
    StateInvariantBroken,
    Stuck,
    TooLarge,
    UniverseMismatch,
    axiom_check,
    circuit_eliminate,
    concat_sum,
    direct_sum,
    explicit,
    free,
    graphic,
    matroid_from_json,
    matroid_to_json,
    outgoing_from_circuit,
    partition,
    relabel,
    simultaneous_exchange,
    uniform,
    zero,
)
from .intersect import (
    AugPath,
    ExchangeDigraph,
    FeasibleState,
    IntersectionCertificate,
    MixedContext,
    SplitInput,
    Trace,
    augment,
    build_exchange_digraph,
    edmonds_solve,
    edmonds_step,
    extend_to_nice,
    find_aug_path,
    key_step,
    mixed_solve,
    verify_certificate,
)
from .orient import (
    DemandGraph,
    OrientationOutcome,
    build_instance,
    deficiency_counting_check,
    orient_solve,
    verify_outcome,
)
from .packcov import (
    MatroidFamily,
    PackCovResult,
    derive_intersection,
    lift_family,
    packcov_solve,
    verify_packcov,
)
from .waves import (
    PairContext,
    Wave,
    check_cond,
    check_cond_plus,
    common_base_B,
    feasible,
    is_wave,
    largest_wave,
    nice_feasible,
)

__all__ = [name for name in dir() if not name.startswith("_")]
