"""hspec: pseudo-multipliers of the quantum harmonic oscillator as truncated
matrices on the Hermite basis, with Schatten-class criteria and trace
formulas checked against computed spectra."""

__version__ = "0.1.0"

from .multiindex import MultiIndex, TruncationSpec, enumerate_level
from .hermite import (
    QuadratureRule,
    eval_hermite_1d,
    eval_hermite_multi,
    gauss_hermite_rule,
    hermite_table,
    oscillator_eigenvalue,
)
from .symbol import (
    SymbolError,
    SymbolEvalError,
    SymbolParseError,
    SymbolSpec,
    builtin_symbol,
    eval_symbol,
    load_symbol,
    parse_symbol,
    pretty_print,
    symbol_from_dict,
    symbol_to_dict,
    table_symbol,
)
from .operator import (
    CoefficientVector,
    OperatorMatrix,
    analyze,
    apply_matrix,
    assemble_matrix,
    export_matrix_csv,
    kernel_eval,
    synthesize,
)
from .schatten import (
    SchattenReport,
    build_report,
    column_integrals,
    hilbert_schmidt_direct,
    schatten_norm,
    schatten_sum,
    singular_values,
    spectral_trace,
    trace_formula,
)
from .criteria import (
    CriterionPreconditionError,
    CriterionVerdict,
    check_hilbert_schmidt,
    check_multiplier_schatten,
    check_sr_sigma,
    check_sr_small,
    check_trace_class_positive,
    classify_tail,
    default_sigma,
    sigma_lower_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
