"""Replacement conflicts and the precise / greedy / stochastic scheduling policies."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .circuit import Circuit
from .matcher import MatchCandidate

POLICIES = ("precise", "greedy", "stochastic")


class SchedulerError(RuntimeError):
    pass


@dataclass(frozen=True)
class Policy:
    kind: str = "greedy"
    seed: int = 0
    queue_cap: int = 10_000

    def __post_init__(self):
        if self.kind not in POLICIES:
            raise ValueError(f"unknown policy {self.kind!r}; expected one of {POLICIES}")
        if self.queue_cap < 1:
            raise ValueError("queue_cap must be positive")


@dataclass
class Scheduler:
    picks: list[MatchCandidate] = field(default_factory=list)

    def __len__(self):
        return len(self.picks)

    def __iter__(self):
        return iter(self.picks)

    def indices(self) -> list[int]:
        return [i for p in self.picks for i in p.indices]


@dataclass
class ConflictSet:
    index: int
    members: list[MatchCandidate]


def find_conflicts(candidates: Sequence[MatchCandidate]) -> list[ConflictSet]:
    """Group overlapping candidates (connected components of the overlap relation).

    Each group is tagged with its smallest index claimed by two or more members and
    every member's ``conflict`` field is set to that index.
    """
    owners: dict[int, list[int]] = {}
    for k, c in enumerate(candidates):
        for i in c.indices:
            owners.setdefault(i, []).append(k)
    parent = list(range(len(candidates)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ks in owners.values():
        for k in ks[1:]:
            parent[find(k)] = find(ks[0])
    groups: dict[int, list[int]] = {}
    for k in range(len(candidates)):
        groups.setdefault(find(k), []).append(k)
    out = []
    for ks in groups.values():
        if len(ks) < 2:
            continue
        members = set(ks)
        shared = min(i for i, o in owners.items() if len(o) > 1 and o[0] in members)
        for k in ks:
            candidates[k].conflict = shared
        out.append(ConflictSet(shared, [candidates[k] for k in ks]))
    out.sort(key=lambda cs: cs.index)
    return out


class _Search:
    """Shared machinery of the three policies; a state is the set of picked candidate ids."""

    def __init__(self, candidates: Sequence[MatchCandidate]):
        self.cands = list(candidates)
        self.sets = [frozenset(c.indices) for c in self.cands]

    def live(self, consumed: frozenset[int]) -> list[int]:
        return [k for k, s in enumerate(self.sets) if not (s & consumed)]

    def advance(self, picks: tuple[int, ...], consumed: frozenset[int]):
        """Add every unconflicted live candidate; return the next conflict, if any."""
        while True:
            live = self.live(consumed)
            owners: dict[int, list[int]] = {}
            for k in live:
                for i in self.sets[k]:
                    owners.setdefault(i, []).append(k)
            clashing = {k for ks in owners.values() if len(ks) > 1 for k in ks}
            free = [k for k in live if k not in clashing]
            for k in free:
                picks += (k,)
                consumed |= self.sets[k]
            if not clashing:
                return picks, consumed, None, []
            i = min(i for i, ks in owners.items() if len(ks) > 1)
            return picks, consumed, i, sorted(owners[i], key=self.order)

    def order(self, k: int):
        c = self.cands[k]
        return (c.first, c.rule_index, c.indices)

    def build(self, picks: Iterable[int], conflicts: dict[int, int]) -> Scheduler:
        out = []
        for k in sorted(picks, key=self.order):
            out.append(replace(self.cands[k], conflict=conflicts.get(k, -1)))
        return Scheduler(out)


def _single_path(search: _Search, choose) -> Scheduler:
    picks: tuple[int, ...] = ()
    consumed: frozenset[int] = frozenset()
    conflicts: dict[int, int] = {}
    while True:
        picks, consumed, i, members = search.advance(picks, consumed)
        if i is None:
            return search.build(picks, conflicts)
        k = choose(members)
        conflicts[k] = i
        picks += (k,)
        consumed |= search.sets[k]


def solve_conflicts(ct: Circuit, candidates: Sequence[MatchCandidate], policy: Policy = Policy()) -> Scheduler:
    """Select an index-disjoint scheduler from ``candidates`` under ``policy``.

    Conflicts are resolved left to right at the smallest index claimed by several
    live candidates.  Greedy takes the member whose match starts first (rule order
    breaks ties), stochastic draws uniformly from a seeded generator, and precise
    explores every choice breadth-first and keeps the scheduler whose rewritten
    circuit has the smallest depth (then fewest gates, then earliest indices).
    """
    search = _Search(candidates)
    if policy.kind == "greedy":
        return _single_path(search, lambda members: members[0])
    if policy.kind == "stochastic":
        rng = random.Random(policy.seed)
        return _single_path(search, lambda members: members[rng.randrange(len(members))])
    return _precise(ct, search, policy)


def _precise(ct: Circuit, search: _Search, policy: Policy) -> Scheduler:
    from .circuit import depth, remove_identities
    from .rewriter import substitute

    def score(sch: Scheduler):
        out = remove_identities(substitute(ct, sch))
        return (depth(out), len(out), [p.first for p in sch.picks])

    return min(_enumerate(search, policy.queue_cap), key=score)


def _enumerate(search: _Search, queue_cap: int) -> list[Scheduler]:
    queue = deque([((), frozenset(), ())])
    seen = {frozenset()}
    out = []
    while queue:
        picks, consumed, conf = queue.popleft()
        picks, consumed, i, members = search.advance(picks, consumed)
        if i is None:
            out.append(search.build(picks, dict(conf)))
            continue
        for k in members:
            state = frozenset(picks + (k,))
            if state in seen:
                continue
            seen.add(state)
            if len(seen) > queue_cap:
                raise SchedulerError(
                    f"precise policy exceeded its queue cap of {queue_cap}; "
                    "use the greedy or stochastic policy")
            queue.append((picks + (k,), consumed | search.sets[k], conf + ((k, i),)))
    return out


def all_schedulers(ct: Circuit, candidates: Sequence[MatchCandidate], queue_cap: int = 10_000) -> list[Scheduler]:
    """Every complete scheduler the precise search reaches."""
    return _enumerate(_Search(candidates), queue_cap)
