"""q-expansions, the level-8 newform and the Hauptmodul of the family."""
from modular.hauptmodul import eval_t, hauptmodul_series, invert_k, k_of
from modular.newform import TraceRecord, cm_trace, euler_product_L3, lf3_partial, newform_coeffs, trace_table
from modular.qseries import QExpansion, eta_product, eta_q, qexp_mul, qexp_pow

__all__ = [
    "QExpansion",
    "TraceRecord",
    "cm_trace",
    "eta_product",
    "eta_q",
    "euler_product_L3",
    "eval_t",
    "hauptmodul_series",
    "invert_k",
    "k_of",
    "lf3_partial",
    "newform_coeffs",
    "qexp_mul",
    "qexp_pow",
    "trace_table",
]
