"""Point counts of Y over F_p and F_{p^2}, and the Frobenius traces they determine."""
from counting.fields import FiniteField
from counting.points import (
    CountReport,
    DichotomyReport,
    check_congruence,
    count_report,
    count_Yprime,
    count_Yprime_bruteforce,
    count_Yprime_oracle,
    report_rows,
    trace_from_count,
    verify_dichotomy,
)

__all__ = [
    "CountReport",
    "DichotomyReport",
    "FiniteField",
    "check_congruence",
    "count_Yprime",
    "count_Yprime_bruteforce",
    "count_Yprime_oracle",
    "count_report",
    "report_rows",
    "trace_from_count",
    "verify_dichotomy",
]
