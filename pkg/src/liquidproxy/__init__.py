"""Binary aggregation with abstentions, delegable proxy voting and Boolean DeGroot processes."""
from .aggregation import (MAJ, Aggregator, BudgetExceeded, QuotaError, QuotaSpec, Structure,
                          check_properties, check_property, majority, quota_rule, undecisiveness)
from .bdp import BdpOutcome, DelegationStructure, Inconclusive, InconsistentStart, run
from .default import DefaultEntry, pv_maj_default, translate_t_prime
from .kernels import BACKEND
from .logic import Constraint, EnumerationLimitError, FormulaSyntaxError, classify_agenda, parse_formula
from .proxy import PV_MAJ, PV_VISCOUS, Delegate, DelegationGraph, embed_s, pv_quota, translate_t

__version__ = "0.1.0"

__all__ = [
    "Aggregator", "BACKEND", "BdpOutcome", "BudgetExceeded", "Constraint", "DefaultEntry", "Delegate",
    "DelegationGraph", "DelegationStructure", "EnumerationLimitError", "FormulaSyntaxError",
    "Inconclusive", "InconsistentStart", "MAJ", "PV_MAJ", "PV_VISCOUS", "QuotaError", "QuotaSpec",
    "Structure", "check_properties", "check_property", "classify_agenda", "embed_s", "majority",
    "parse_formula", "pv_maj_default", "pv_quota", "quota_rule", "run", "translate_t",
    "translate_t_prime", "undecisiveness",
]
