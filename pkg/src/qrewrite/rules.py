"""Rule sets: the built-in libraries and oracle validation of rules."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator

from .circuit import Circuit
from .oracle import MAX_QUBITS, CapacityError, circuit_unitary, equiv_up_to_phase
from .qasm import RuleSpec, parse_rules

BUILTIN = ("internal", "surface17", "xcx", "ibm")
SAMPLE_ANGLES = (math.pi / 3, -math.pi / 7, 1.0)


@dataclass(frozen=True)
class RuleSet:
    name: str
    rules: tuple[RuleSpec, ...]
    kind: str = "external"
    validated: bool = False

    def __iter__(self) -> Iterator[RuleSpec]:
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __getitem__(self, key):
        if isinstance(key, str):
            for r in self.rules:
                if r.name == key:
                    return r
            raise KeyError(key)
        return self.rules[key]

    def gate_names(self) -> set[str]:
        return {t.gate.name for r in self.rules for t in r.pattern}


def _load_builtin(name: str, kind: str) -> RuleSet:
    text = resources.files("qrewrite").joinpath(f"data/{name}.rules.json").read_text()
    rs = RuleSet(name, tuple(parse_rules(text)), kind)
    report = validate(rs)
    return RuleSet(name, rs.rules, kind, validated=report.ok)


def builtin_internal() -> RuleSet:
    """Cancellation, merge and commutation rules used between rewriting rounds."""
    return _load_builtin("internal", "internal")


def builtin_surface17() -> RuleSet:
    """Decomposition of H/Z/S/T/CX/SWAP/CCZ/CCX/R_z into {X, Y, R_x, R_y, CZ}."""
    return _load_builtin("surface17", "external")


def builtin_xcx() -> RuleSet:
    """The four X/CX rules: xx = I, cc = II, three-CX reassociation, xcx = c."""
    return _load_builtin("xcx", "external")


def builtin_ibm() -> RuleSet:
    """u1/u2/u3 translated to R_z/R_y (derived from the gate definitions)."""
    return _load_builtin("ibm", "external")


def load_ruleset(spec: str, kind: str = "external") -> RuleSet:
    """Resolve a built-in set name first, then a rule-file path."""
    if spec in BUILTIN:
        return _load_builtin(spec, kind if spec != "internal" else "internal")
    path = Path(spec)
    return RuleSet(path.name.split(".")[0], tuple(parse_rules(path.read_text())), kind)


def merge(name: str, *sets: RuleSet) -> RuleSet:
    rules = tuple(r for s in sets for r in s)
    return RuleSet(name, rules, sets[0].kind if sets else "external",
                   all(s.validated for s in sets))


@dataclass
class RuleCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[RuleCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[RuleCheck]:
        return [c for c in self.checks if not c.passed]


def rule_equivalent(rule: RuleSpec, tol: float = 1e-9) -> tuple[bool, str]:
    """Compare pattern and substitution unitaries at several angle bindings."""
    n = rule.num_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"oracle capacity exceeded: rule {rule.name!r} uses {n} qubits")
    names = sorted(rule.variables())
    identity = {q: q for q in range(n)}
    for shift in range(len(SAMPLE_ANGLES)):
        bindings = {v: SAMPLE_ANGLES[(shift + k) % len(SAMPLE_ANGLES)] for k, v in enumerate(names)}
        pat = Circuit(n, [t.instantiate(identity, bindings) for t in rule.pattern])
        sub = Circuit(n, [t.instantiate(identity, bindings) for t in rule.substitution])
        if not equiv_up_to_phase(circuit_unitary(pat), circuit_unitary(sub), tol):
            return False, f"unitaries differ at {bindings}"
        if not names:
            break
    return True, ""


def validate(rs) -> ValidationReport:
    report = ValidationReport()
    for rule in rs:
        ok, detail = rule_equivalent(rule)
        report.checks.append(RuleCheck(rule.name, ok, detail))
    return report
