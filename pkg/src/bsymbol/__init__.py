"""b-symbol weight enumerators of one-weight and semiprimitive two-weight
irreducible cyclic codes, with brute-force and character-sum oracles."""

from .code import (
    CodeParams,
    Codeword,
    WeightEnumerator,
    b_distance,
    b_symbol_weight,
    codeword,
    hamming_weight,
    validate_params,
)
from .errors import BSymbolError, BudgetExceededError, ParameterError
from .field import FieldSpec, FieldTables, build_field, class_index, default_spec, mult_order, trace_to
from .oracle import (
    TraceSpectrum,
    VerificationReport,
    enumerator_brute,
    gaussian_period_exact,
    verify_all,
    verify_lemma_weight_identity,
    verify_mu_collapse,
    verify_multiset_lemma,
)
from .theory import (
    MuProfile,
    PbSet,
    SemiprimitiveData,
    build_P,
    bsymbol_enumerator_closed,
    bsymbol_weight_value,
    gaussian_period_closed,
    hamming_enumerator_closed,
    mds_check,
    mu_profile,
    one_weight_enumerator,
    semiprimitivity,
    theory_params,
)

__version__ = "0.1.0"
