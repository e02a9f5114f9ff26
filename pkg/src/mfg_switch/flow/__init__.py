from .builder import combine, extremal_evolution
from .certify import MembershipCertificate, Refusal, certify_membership
from .decision_plan import DecisionPlan
from .eps_paths import (
    EpsPath,
    RoundingDiagnostics,
    enumerate_eps_paths,
    rounding_diagnostics,
)

__all__ = [
    "DecisionPlan",
    "EpsPath",
    "MembershipCertificate",
    "Refusal",
    "RoundingDiagnostics",
    "certify_membership",
    "combine",
    "enumerate_eps_paths",
    "extremal_evolution",
    "rounding_diagnostics",
]
