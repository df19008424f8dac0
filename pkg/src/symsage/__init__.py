"""symsage: AM/GM (SAGE) relative-entropy bounds for signomials with
permutation-symmetry reduction and a built-in exponential-cone solver."""

__version__ = "0.1.0"

from .combinatorics import (
    SizePrediction,
    contingency_count,
    double_coset_count,
    orbit_type,
    pad_exponent,
    partial_injection_count,
    predict_sizes,
    stabilization_threshold,
)
from .groups import (
    OrbitClass,
    Permutation,
    PermutationGroup,
    distinct_permutations,
    group_to_json_dict,
    parse_group,
)
from .signomials import (
    Signomial,
    SignSupport,
    check_invariance,
    parse_signomial,
    sign_partition,
    symmetrize,
)
from .programs import (
    CanonicalProgram,
    ConicProgram,
    SupportRegion,
    build_bound_program,
    build_membership_reduced,
    build_membership_standard,
    build_scale_program,
    canonicalize,
    export_program_json,
    parse_program_json,
    predict_program_sizes,
)
from .solver import (
    ResidualReport,
    SolveResult,
    SolveStatus,
    SolverConfig,
    residuals,
    solve,
)
from .certificates import (
    AGEDecomposition,
    CertificateReport,
    ReducedCertificate,
    expand_certificate,
    extract_certificate,
    verify_certificate,
)
from .families import FAMILY_NAMES, generate_family
from .bench import BenchmarkRow, render_table, rows_to_jsonl, run_benchmark
