"""Combs with holes over pluggable symmetric monoidal theories.

The package keeps two pictures of a process with a gap in the middle: a
concrete pair of morphisms around the hole, and the behaviour of that
pair under every way of filling the hole.  Decision procedures compare
representatives under several equivalence relations of increasing
context sensitivity, report certified verdicts with replayable
witnesses, and degrade to explicit partial coverage when a search is
genuinely unbounded.
"""

from .core import (
    Backend,
    BadSplit,
    BoundaryMismatch,
    Budget,
    CategoryError,
    Compose,
    Decision,
    DimensionMismatch,
    ExhaustionWitness,
    FactorWitness,
    Generator,
    HoleMismatch,
    Identity,
    IllTypedFunctor,
    IncompatibleStrategy,
    MorTerm,
    NonComposableMove,
    NotCartesian,
    NotCompactClosed,
    NotDaggerBackend,
    NotEnumerable,
    NotInhabited,
    ObjectWord,
    ProbeWitness,
    SlidePathWitness,
    SlideStep,
    Symmetry,
    Tensor,
    TypeMismatch,
    UnknownGenerator,
    UnsupportedShape,
    Verdict,
    block_permutation,
    eval_term,
    permutation_term,
    typecheck,
)
from .backends import (
    FinFunBackend,
    FinMap,
    IdempotentFreeBackend,
    Mat,
    MatrixBackend,
    PointedFreeBackend,
    StrandMor,
    UnitaryBackend,
    WiringMor,
    functions_as_boolean_matrices,
    tensor_separate,
)
from .comb import (
    BackendFunctor,
    COMB_STRATEGIES,
    CombRep,
    braid_eval,
    comb,
    comb_compose,
    comb_tensor,
    equiv_comb,
    equiv_sigma,
    equiv_tau,
    extended_eval,
    identity_comb,
    lens_pair,
    lift_functor,
    sigma_congruence_search,
    swap_probe,
)
from .optic import (
    OPTIC_STRATEGIES,
    OpticRep,
    check_probe_witness,
    equiv_optic,
    slide_related,
    unitary_comb_factor,
)
from .cpm import (
    CpmMorphism,
    choi_matrix,
    cpinf_equiv,
    cpm_equal,
    cpm_equiv,
    dagger_comb,
    is_completely_positive,
    is_dagger_comb,
    kraus_slices,
    positive_probe_frame,
    to_cpm,
)
from .polycomb import (
    PolyCombRep,
    from_comb,
    identity_poly,
    poly,
    poly_compose_at,
    poly_equiv,
    poly_extended_eval,
    poly_name,
    star_counit,
    star_unit,
    to_comb,
)
from .sampling import (
    enumerate_combs,
    env_words_for,
    random_isometry,
    random_unitary,
    words_of_length,
)

__version__ = "0.1.0"
