"""Pattern-matching quantum circuit rewriting over gate-symbol sequences."""
from .circuit import (Circuit, CircuitMetrics, Instruction, depth, gate_sequence, metrics, op,
                      remove_identities)
from .gates import GATES, GateKind, lookup
from .matcher import MatchCandidate, check_qubit_condition, distinct_subsequence, pattern_matching
from .qasm import AngleExpr, RuleSpec, parse_angle, parse_qasm, parse_rules, serialize_qasm
from .rewriter import RoundReport, optimize, rewrite_once, substitute
from .rules import (RuleSet, builtin_xcx, builtin_ibm, builtin_internal, builtin_surface17,
                    load_ruleset, validate)
from .scheduler import Policy, Scheduler, find_conflicts, solve_conflicts

__version__ = "0.1.0"
