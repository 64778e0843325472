"""Boolean minimization and contrastive explanation generation."""

from .explain import (CoalitionClause, ExplanationClause, ExplanationReport,
                      FailureEntry, NeverObservedClause, PrecedenceClause,
                      clause_to_dict, explain, render_clause, repair_query,
                      select_term, target_states, translate)
from .qm import DEFAULT_VAR_CAP, Implicant, minimal_dnf, prime_implicants

__all__ = [
    "CoalitionClause", "DEFAULT_VAR_CAP", "ExplanationClause",
    "ExplanationReport", "FailureEntry", "Implicant", "NeverObservedClause",
    "PrecedenceClause", "clause_to_dict", "explain", "minimal_dnf",
    "prime_implicants", "render_clause", "repair_query", "select_term",
    "target_states", "translate",
]
