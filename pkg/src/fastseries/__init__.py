"""Truncated power series over complex coefficients with budget-instrumented
fast exponential, inverse and constant-power algorithms."""

from .block_engine import (
    BlockCache,
    BlockPlan,
    MiddleScratch,
    ensure_block_spectra,
    shifted_middle_product,
    triple_middle_product,
)
from .cost_ledger import (
    EXPECTED_STAGE_UNITS,
    CostLedger,
    StageBudget,
    main_term_units,
    report,
    report_kv,
    report_text,
    stage_table,
)
from .errors import (
    DomainError,
    FormatError,
    KindMismatchError,
    PlanError,
    UnsupportedLengthError,
)
from .fast_ops import (
    PowExponent,
    choose_plan,
    exp_first_half,
    fast_exp,
    fast_inverse,
    fast_log,
    fast_pow,
    log_extend,
    s_iteration,
)
from .fft_core import (
    Spectrum,
    TransformSize,
    dft,
    dft_3k,
    double_dft,
    granted_length,
    inverse_dft,
    inverse_double_dft,
    multiply,
)
from .oracle import (
    oracle_exp,
    oracle_inverse,
    oracle_log,
    oracle_middle,
    oracle_pow,
)
from .series_core import (
    TruncatedSeries,
    add,
    derivative,
    floor_div_xn,
    integral,
    load_series,
    mul_mod,
    overlap_add,
    read_series,
    scale,
    split_blocks,
    sub,
    truncate,
    write_series,
    zero_extend,
)

__version__ = "0.1.0"
