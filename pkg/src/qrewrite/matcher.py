"""Pattern matching: distinct-subsequence DP over gate sequences, then the qubit
mapping / angle unification / qubit-state-independence filter."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .circuit import ANGLE_TOL, Circuit, angles_close, gate_sequence
from .qasm import RuleSpec

INF = math.inf


def default_delta(pattern_len: int) -> int:
    return 4 * pattern_len


class SubsequenceTable:
    """Incremental form of the distinct-subsequence DP.

    ``table[j]`` holds the partial matches of ``gp[:j]`` found so far.  Each
    ``push`` consumes the next target symbol, scanning ``j`` downwards so a
    position is never used twice within one tuple, and returns the complete
    matches that end at it.  ``pop`` undoes the last push.
    """

    def __init__(self, gp: str, delta: float = INF):
        if delta < 1:
            raise ValueError(f"delta must be >= 1, got {delta}")
        if not gp:
            raise ValueError("empty pattern")
        self.gp = gp
        self.delta = delta
        self.table: list[list[tuple[int, ...]]] = [[()]] + [[] for _ in gp]
        self.pos = 0
        self._log: list[list[tuple[int, int]]] = []

    def push(self, ch: str) -> list[tuple[int, ...]]:
        i, m, table = self.pos, len(self.gp), self.table
        log = []
        for j in range(min(i, m - 1), -1, -1):
            if ch != self.gp[j]:
                continue
            if j == 0:
                ext = [(i,)]
            else:
                ext = [s + (i,) for s in table[j] if i - s[0] < self.delta]
            if ext:
                log.append((j + 1, len(table[j + 1])))
                table[j + 1].extend(ext)
        self.pos += 1
        self._log.append(log)
        if log and log[0][0] == m:
            return table[m][log[0][1]:]
        return []

    def pop(self) -> None:
        for k, n in self._log.pop():
            del self.table[k][n:]
        self.pos -= 1

    def prune(self) -> None:
        """Drop partial matches that can no longer be extended; clears the undo log."""
        for j in range(1, len(self.gp)):
            self.table[j] = [s for s in self.table[j] if self.pos - s[0] < self.delta]
        self._log.clear()

    def matches(self) -> list[tuple[int, ...]]:
        return sorted(self.table[len(self.gp)])


def distinct_subsequence(gt: str, gp: str, delta: float = INF) -> list[tuple[int, ...]]:
    """All strictly increasing index tuples ``s`` with ``gt[s[k]] == gp[k]`` and
    ``s[-1] - s[0] < delta``, in lexicographic order."""
    dp = SubsequenceTable(gp, delta)
    finite = math.isfinite(delta)
    for ch in gt:
        dp.push(ch)
        if finite and dp.pos % 64 == 0:
            dp.prune()
    return dp.matches()


@dataclass
class MatchCandidate:
    """A replacement candidate: matched indices, rule, qubit mapping, angle bindings."""

    indices: tuple[int, ...]
    rule: RuleSpec
    mapping: dict[int, int]
    bindings: dict[str, float] = field(default_factory=dict)
    rule_index: int = 0
    conflict: int = -1

    @property
    def first(self) -> int:
        return self.indices[0]

    def key(self):
        return (self.rule_index, self.indices)

    def __repr__(self):
        c = f", c={self.conflict}" if self.conflict >= 0 else ""
        return f"({set(self.indices)}, {self.rule.name}{c})"


def _unify_angle(expr, value: float, bindings: dict[str, float], tol: float) -> bool:
    ground = expr.ground_value()
    if expr.is_ground:
        return angles_close(ground, value, tol)
    ((name, coeff),) = expr.var_terms
    if name in bindings:
        return angles_close(float(coeff) * bindings[name] + ground, value, tol)
    bindings[name] = math.remainder((value - ground) / float(coeff), 2 * math.pi)
    return angles_close(float(coeff) * bindings[name] + ground, value, tol)


def bind(s: Sequence[int], ct: Circuit, rule: RuleSpec, tol: float = ANGLE_TOL):
    """Qubit mapping and angle bindings for ``s``, or ``None`` if inconsistent."""
    mapping: dict[int, int] = {}
    used: dict[int, int] = {}
    bindings: dict[str, float] = {}
    for idx, tmpl in zip(s, rule.pattern):
        ins = ct[idx]
        if ins.gate is not tmpl.gate:
            return None
        for p, q in zip(tmpl.qubits, ins.qubits):
            if mapping.get(p, q) != q or used.get(q, p) != p:
                return None
            mapping[p] = q
            used[q] = p
        for expr, value in zip(tmpl.angles, ins.angles):
            if not _unify_angle(expr, value, bindings, tol):
                return None
    return mapping, bindings


def _roles(templates, mapping) -> tuple[set[int], set[int]]:
    ctrl, targ = set(), set()
    for t in templates:
        qs = [mapping[q] for q in t.qubits]
        ctrl |= t.gate.controls(qs)
        targ |= t.gate.targets(qs)
    return ctrl, targ


def independent(s: Sequence[int], ct: Circuit, rule: RuleSpec, mapping: Mapping[int, int]) -> bool:
    """Qubit-state independence of the matched gates w.r.t. the gap gates.

    The substitution is written back at the matched positions, so its gates are
    held to the same test as the pattern's.
    """
    if len(s) < 2 or s[-1] - s[0] + 1 == len(s):
        return True
    inside = set(s)
    g_ctrl, g_targ = set(), set()
    for i in range(s[0] + 1, s[-1]):
        if i not in inside:
            ins = ct[i]
            g_ctrl |= ins.controls()
            g_targ |= ins.targets()
    if not g_ctrl and not g_targ:
        return True
    for group in (rule.pattern, rule.substitution):
        ctrl, targ = _roles(group, mapping)
        if ctrl & g_targ or targ & g_ctrl:
            return False
    return True


def check_qubit_condition(s: Sequence[int], ct: Circuit, rule: RuleSpec, tol: float = ANGLE_TOL):
    """Return ``(mapping, bindings)`` if ``s`` is an acceptable match of ``rule``, else None."""
    if len(s) != len(rule.pattern):
        raise ValueError("subsequence length differs from pattern length")
    bound = bind(s, ct, rule, tol)
    if bound is None:
        return None
    mapping, bindings = bound
    if not independent(s, ct, rule, mapping):
        return None
    return mapping, bindings


def pattern_matching(ct: Circuit, rules: Iterable[RuleSpec], delta: float | None = None) -> list[MatchCandidate]:
    """Every accepted match of every rule, ordered by rule then by indices.

    ``delta=None`` uses ``4 * len(pattern)`` per rule; ``math.inf`` disables the window.
    """
    gt = gate_sequence(ct)
    out = []
    for k, rule in enumerate(rules):
        d = default_delta(len(rule.pattern)) if delta is None else delta
        for s in distinct_subsequence(gt, rule.sequence, d):
            ok = check_qubit_condition(s, ct, rule)
            if ok is not None:
                out.append(MatchCandidate(s, rule, ok[0], ok[1], k))
    return out
