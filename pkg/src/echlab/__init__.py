"""Exact computations with filtered, graded chain complexes over the integers.

The package assembles the ech complex from Heegaard-Floer-style chain data
tensored with copies of the explicit ``(m, o)`` complex, computes its
flavored homology, and checks the structural statements relating it to the
input data.
"""

__version__ = "1.0.0"

from .errors import (  # noqa: E402
    CompositionNonzero,
    CyclicMatching,
    EchError,
    ExactnessFailure,
    GradingMismatch,
    InvalidData,
    NonUnitPivot,
    NotChainMap,
    NotStabilized,
    NotSubcomplex,
    ResourceExhausted,
)
from .linalg import FinAbGroup, IntMatrix, SNFResult, field_homology_pair, homology_pair, induced_map, smith_normal_form  # noqa: E402
from .complexes import (  # noqa: E402
    SES,
    ChainHomology,
    GradedComplex,
    GradedEndo,
    LESRow,
    long_exact_sequence,
    morse_reduce,
    sub_quotient,
    tensor,
    verify_complex,
)
from .ocomplex import OLabel, boundary_star, limit_homology, window  # noqa: E402
from .hf import HFData, flavor_complex, u_map, validate  # noqa: E402
from .ech import EchGenerator, build_ech, ech_flavor_homology, t_action  # noqa: E402
from .verify import (  # noqa: E402
    VerificationReport,
    check_collapse,
    check_lemma_2_5,
    check_module_structure,
    check_theorem_2_4,
)
