from .agreement import (
    AgreementReport,
    AnnotationRecord,
    AssignmentMatrix,
    KappaBand,
    VotingOutcome,
    agreement_pipeline,
    build_assignment_matrix,
    fleiss_kappa,
    interpret_kappa,
    majority_vote,
)
from .store import AnnotationStore

__all__ = [
    "AgreementReport",
    "AnnotationRecord",
    "AnnotationStore",
    "AssignmentMatrix",
    "KappaBand",
    "VotingOutcome",
    "agreement_pipeline",
    "build_assignment_matrix",
    "fleiss_kappa",
    "interpret_kappa",
    "majority_vote",
]
