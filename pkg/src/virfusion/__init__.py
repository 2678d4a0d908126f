"""Exact fusion-rule computations for Virasoro vertex operator algebras."""

from .exact import (
    BivariatePolynomial,
    OddHalfPower,
    Partition,
    Rational,
    SqrtLaurent,
    bivariate_evaluate,
    enumerate_partitions,
    rat,
    rational_sqrt,
    sqrt_laurent_specialize,
)
from .verma import (
    C1qIrreducible,
    GenericVerma,
    HighestWeightParams,
    InvalidLabel,
    MinimalIrreducible,
    ModuleLabel,
    NonUniqueSolution,
    SolverFailure,
    TParam,
    VermaVector,
    apply_mode,
    apply_word,
    canonicalize_label_c1q,
    central_charge_pq,
    central_charge_t,
    is_irreducible_verma_c1q,
    kac_weight_pq,
    maximal_submodule_generators,
    singular_vector,
    weight_alpha_beta_t,
    weight_c1q,
)
from .zhu import (
    QFactorSpec,
    ZhuClass,
    equivalence_check,
    equivalence_sweep,
    fz_upper_bound,
    left_right_omega,
    p_squared,
    product_condition,
    q_factor,
    singular_image,
    zhu_reduce,
)
from .threept import (
    LabelOutOfBox,
    LimitReport,
    LimitRow,
    NotStabilized,
    ThreePointCoefficient,
    ThreePointDatum,
    evaluate_descendant,
    limit_check,
    limit_sequence,
    null_decoupling,
)
from .fusion import (
    ASet,
    CrossValidateReport,
    FusionAnswer,
    NotIrreducibleVerma,
    a_set,
    cross_validate,
    fusion_c1q,
    fusion_minimal,
    fusion_product_c1q,
    fusion_verma_mixed,
    fusion_verma_target_zero,
)
from .cache import CacheEntry, SingularVectorCache, cached_singular_vector

__version__ = "0.1.0"
