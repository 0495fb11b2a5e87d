from .cocycle import Cocycle2, CoboundaryCertificate, MembershipResult, b2_membership, coboundary, pullback_psi
from .kernels import diagram_checks, exact_seq_check, kernel_enum
from .lemmas import Fragment, pairing_table, run_check
from .nl import FiniteKernelAlg, cartier_pairing, nl_algebra
from .scenario import Scenario, build_scenario, cyclotomic_scenario, universal_ring

__all__ = [
    "Cocycle2",
    "CoboundaryCertificate",
    "FiniteKernelAlg",
    "Fragment",
    "MembershipResult",
    "Scenario",
    "b2_membership",
    "build_scenario",
    "cartier_pairing",
    "coboundary",
    "cyclotomic_scenario",
    "diagram_checks",
    "exact_seq_check",
    "kernel_enum",
    "nl_algebra",
    "pairing_table",
    "pullback_psi",
    "run_check",
    "universal_ring",
]
