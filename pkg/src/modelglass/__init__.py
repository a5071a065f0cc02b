"""Finite model theory workbench: formulas, finite models, definable sets,
filters and types, principal ultraproducts, and stable graph combinatorics."""

import os as _os

# MODELGLASS_THREADS caps the BLAS pools used by the contraction engine; it has
# to be in place before numpy loads.
_threads = _os.environ.get("MODELGLASS_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"

from .syntax import (  # noqa: E402
    Signature,
    build_ax_sentence,
    parse_formula,
    parse_signature,
    print_formula,
)
from .structures import Model, load_model  # noqa: E402
from .semantics import definable_algebra, eval_formula, eval_term, holds, same_theory_on, solution_set  # noqa: E402
from .filters import Filter, SetFamily, generated_filter, is_filter, is_ultrafilter  # noqa: E402
from .typespace import check_partial_type, complete_types, count_dlo_types  # noqa: E402
from .ultraproduct import ax_check, iso_check, los_check, ultraproduct  # noqa: E402

__all__ = [
    "Filter",
    "Model",
    "SetFamily",
    "Signature",
    "ax_check",
    "build_ax_sentence",
    "check_partial_type",
    "complete_types",
    "count_dlo_types",
    "definable_algebra",
    "eval_formula",
    "eval_term",
    "generated_filter",
    "holds",
    "is_filter",
    "is_ultrafilter",
    "iso_check",
    "load_model",
    "los_check",
    "parse_formula",
    "parse_signature",
    "print_formula",
    "same_theory_on",
    "solution_set",
    "ultraproduct",
]
