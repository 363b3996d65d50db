"""Applying schedulers and the iterative optimise / rewrite loop."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .circuit import Circuit, Instruction, depth, remove_identities
from .rules import RuleSet
from .scheduler import Policy, Scheduler, solve_conflicts
from .matcher import pattern_matching


def substitute(ct: Circuit, sch: Scheduler) -> Circuit:
    """Write every pick's substitution back at its matched positions.

    The first ``min(l1, l2)`` matched positions receive substitution gates in
    order; surplus substitution gates go right after the last overwritten
    position and surplus matched positions are deleted.  Edits are collected per
    original position and flattened once, so interleaved picks cannot shift each
    other's indices.
    """
    slots: list[list[Instruction]] = [[ins] for ins in ct]
    for pick in reversed(sch.picks):
        if any(not 0 <= i < len(ct) for i in pick.indices):
            raise IndexError(f"pick {pick.indices} out of range for {len(ct)} instructions")
        missing = {q for t in pick.rule.substitution for q in t.qubits} - pick.mapping.keys()
        if missing:
            raise RuntimeError(f"rule {pick.rule.name!r}: mapping lacks pattern qubits {sorted(missing)}")
        sub = [t.instantiate(pick.mapping, pick.bindings) for t in pick.rule.substitution]
        s = pick.indices
        l1, l2 = len(s), len(sub)
        n = min(l1, l2)
        for j in range(n):
            slots[s[j]] = [sub[j]]
        if l2 > n:
            slots[s[n - 1]].extend(sub[n:])
        for j in range(n, l1):
            slots[s[j]] = []
    return ct.with_instructions(ins for slot in slots for ins in slot)


def rewrite_once(ct: Circuit, rules, policy: Policy = Policy(), delta=None) -> tuple[Circuit, int]:
    """Match, schedule, substitute and drop identities; returns ``(circuit, picks)``."""
    rules = list(rules)
    if not rules or len(ct) == 0:
        return ct, 0
    cands = pattern_matching(ct, rules, delta)
    if not cands:
        return ct, 0
    sch = solve_conflicts(ct, cands, policy)
    return remove_identities(substitute(ct, sch)), len(sch)


@dataclass
class RoundRecord:
    round: int
    gates: int
    depth: int
    picks: int
    internal_picks: int = 0
    external_picks: int = 0


@dataclass
class RoundReport:
    rounds: list[RoundRecord] = field(default_factory=list)

    def to_jsonl(self) -> str:
        return "".join(json.dumps({"schema": 1, **asdict(r)}) + "\n" for r in self.rounds)


def _reducing(rule) -> bool:
    kept = [t for t in rule.substitution if not t.gate.is_identity]
    return len(kept) < len(rule.pattern)


def internal_pass(ct: Circuit, rules: RuleSet | None, policy: Policy = Policy(), delta=None,
                  bound: int = 10) -> tuple[Circuit, int]:
    """Run the internal library until nothing matches or ``bound`` passes elapse.

    Gate-count-reducing rules run first.  The remaining rules (commutations and
    re-expressions) are tried in one extra pass that is kept only when the
    reducing rules then shrink the circuit below its size before that pass.
    """
    if rules is None or not len(rules):
        return ct, 0
    reducing = [r for r in rules if _reducing(r)]
    other = [r for r in rules if not _reducing(r)]
    total = 0
    for _ in range(bound):
        ct, k = rewrite_once(ct, reducing, policy, delta)
        total += k
        if k:
            continue
        if not other:
            break
        trial, k1 = rewrite_once(ct, other, policy, delta)
        if not k1:
            break
        trial, k2 = rewrite_once(trial, reducing, policy, delta)
        if len(trial) >= len(ct):
            break
        ct = trial
        total += k1 + k2
    return ct, total


def optimize(ct: Circuit, internal: RuleSet | None, external: RuleSet | None,
             policy: Policy = Policy(), max_rounds: int = 5, delta=None,
             internal_bound: int = 10) -> tuple[Circuit, RoundReport]:
    """Alternate internal optimisation and external rewriting.

    Stops after a round that applies no pick or after ``max_rounds`` rounds.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    report = RoundReport()
    ext = list(external) if external is not None else []
    for r in range(1, max_rounds + 1):
        ct, ki = internal_pass(ct, internal, policy, delta, internal_bound)
        ct, ke = rewrite_once(ct, ext, policy, delta)
        report.rounds.append(RoundRecord(r, len(ct), depth(ct), ki + ke, ki, ke))
        if ki + ke == 0:
            break
    return ct, report
