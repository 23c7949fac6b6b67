"""Solver for all local-nonglobal minimizers of quadratic programs with one
quadratic constraint (inequality or equality), under joint definiteness of
the Hessian pair, with independently verified optimality certificates."""

from .instances import (CorpusEntry, GeneratorConfig, InstanceFormatError,
                        corpus, generate_random, read_instance, write_instance)
from .oracle import (Classification, EmpiricalCheckResult, OracleInconclusive,
                     StationaryPoint, empirical_local_check, scan_all_kkt)
from .pencil import (CongruenceTransform, Definiteness, DefinitenessResult,
                     TransformedProblem, build_transform,
                     detect_joint_definiteness, pull_back)
from .problem import ConstraintKind, NumericalFailure, ProblemInstance
from .rootfind import BisectionOutcome, Terminal, bisect_type2, bisect_type3
from .secular import (Branch, BranchContext, PoleProximityError, SpectralData,
                      branch_interval, candidate_multiplier, psi_eval,
                      psi_prime_eval, spectral_decompose, y_of_eta)
from .solver import (LngmCertificate, SolveReport, SolveStatus, Verdict,
                     solve, solve_gtr, solve_gtre, solve_univariate)
from .verifier import (VerificationVerdict, check_strict_lngm,
                       is_global_candidate, lagrangian_inertia,
                       reduced_hessian_determinant_check)

__version__ = "0.1.0"

__all__ = [
    "Branch", "BranchContext", "BisectionOutcome", "Classification",
    "CongruenceTransform", "ConstraintKind", "CorpusEntry", "Definiteness",
    "DefinitenessResult", "EmpiricalCheckResult", "GeneratorConfig",
    "InstanceFormatError", "LngmCertificate", "NumericalFailure",
    "OracleInconclusive", "PoleProximityError", "ProblemInstance",
    "SolveReport", "SolveStatus", "SpectralData", "StationaryPoint",
    "Terminal", "TransformedProblem", "Verdict", "VerificationVerdict",
    "bisect_type2", "bisect_type3", "branch_interval", "build_transform",
    "candidate_multiplier", "check_strict_lngm", "corpus",
    "detect_joint_definiteness", "empirical_local_check", "generate_random",
    "is_global_candidate", "lagrangian_inertia", "psi_eval", "psi_prime_eval",
    "pull_back", "read_instance", "reduced_hessian_determinant_check",
    "scan_all_kkt", "solve", "solve_gtr", "solve_gtre", "solve_univariate",
    "spectral_decompose", "write_instance", "y_of_eta",
]
