import math
import random

import pytest

from _oracles import random_circuit
from qrewrite.benchmarks import xcx3, xcx16
from qrewrite.circuit import depth, remove_identities
from qrewrite.matcher import MatchCandidate, pattern_matching
from qrewrite.rewriter import substitute
from qrewrite.rules import builtin_xcx, builtin_internal
from qrewrite.scheduler import (Policy, Scheduler, SchedulerError, all_schedulers, find_conflicts,
                                solve_conflicts)

XCX = builtin_xcx()
DUMMY_RULE = XCX["x-x"]


def _cands(index_sets):
    return [MatchCandidate(tuple(s), DUMMY_RULE, {0: 0}, rule_index=0) for s in index_sets]


def _disjoint(sch):
    idx = sch.indices()
    return len(idx) == len(set(idx))


def test_policy_validation():
    with pytest.raises(ValueError):
        Policy("fastest")
    with pytest.raises(ValueError):
        Policy("precise", queue_cap=0)


def test_no_candidates():
    for kind in ("precise", "greedy", "stochastic"):
        assert len(solve_conflicts(xcx3(), [], Policy(kind))) == 0


def test_disjoint_candidates_have_no_conflicts():
    cands = _cands([(0, 1), (2, 3), (5,)])
    assert find_conflicts(cands) == []
    assert all(c.conflict == -1 for c in cands)


def test_conflict_tagged_with_smallest_shared_index():
    cands = _cands([(10, 18), (18, 26, 31), (3, 9)])
    sets = find_conflicts(cands)
    assert len(sets) == 1 and sets[0].index == 18
    assert {c.indices for c in sets[0].members} == {(10, 18), (18, 26, 31)}
    assert [c.conflict for c in cands] == [18, 18, -1]


def test_conflict_grouping_matches_pairwise_oracle():
    rng = random.Random(11)
    for _ in range(300):
        sets = [tuple(sorted(rng.sample(range(15), rng.randint(1, 3)))) for _ in range(rng.randint(0, 8))]
        cands = _cands(sets)
        groups = find_conflicts(cands)
        overlapping = {k for k in range(len(sets)) for j in range(len(sets))
                       if j != k and set(sets[k]) & set(sets[j])}
        in_groups = {id(c) for g in groups for c in g.members}
        assert in_groups == {id(cands[k]) for k in overlapping}
        for k in range(len(sets)):
            assert (cands[k].conflict >= 0) == (k in overlapping)
        # members of distinct groups never overlap
        for a in groups:
            for b in groups:
                if a is not b:
                    assert not any(set(x.indices) & set(y.indices) for x in a.members for y in b.members)


def test_xcx3_schedulers():
    ct = xcx3()
    cands = pattern_matching(ct, XCX, math.inf)
    outs = [remove_identities(substitute(ct, s)) for s in all_schedulers(ct, cands)]
    assert {len(o) for o in outs} == {3}
    assert {depth(o) for o in outs} == {2, 3}
    best = remove_identities(substitute(ct, solve_conflicts(ct, cands, Policy("precise"))))
    assert (len(best), depth(best)) == (3, 2)


def test_xcx3_greedy_picks_first_come():
    ct = xcx3()
    sch = solve_conflicts(ct, pattern_matching(ct, XCX, math.inf), Policy("greedy"))
    assert [(p.rule.name, p.indices) for p in sch] == [("x-x", (0, 1)), ("cx-cx", (2, 4))]
    assert sch.picks[0].conflict == 0 and sch.picks[1].conflict == -1


def test_xcx16_precise_branches_at_conflicts():
    ct = xcx16()
    cands = pattern_matching(ct, XCX, math.inf)
    schedulers = all_schedulers(ct, cands)
    assert len(schedulers) >= 2
    greedy = solve_conflicts(ct, cands, Policy("greedy"))
    assert any([p.indices for p in s] == [p.indices for p in greedy] for s in schedulers)
    # schedulers agree on every unconflicted pick
    common = set.intersection(*({p.indices for p in s if p.conflict < 0} for s in schedulers))
    assert common


def test_greedy_ties_broken_by_rule_order():
    a = MatchCandidate((0, 2), XCX["cx-cx"], {0: 0, 1: 1}, rule_index=1)
    b = MatchCandidate((0, 1), XCX["x-x"], {0: 0}, rule_index=0)
    sch = solve_conflicts(xcx3(), [a, b], Policy("greedy"))
    assert [p.rule_index for p in sch] == [0]


def test_index_disjoint_on_1000_random_candidate_sets():
    rng = random.Random(1000)
    for t in range(1000):
        sets = [tuple(sorted(rng.sample(range(20), rng.randint(1, 4)))) for _ in range(rng.randint(0, 12))]
        for policy in (Policy("greedy"), Policy("stochastic", seed=t)):
            sch = solve_conflicts(xcx3(), _cands(sets), policy)
            assert _disjoint(sch)
            firsts = [p.first for p in sch]
            assert firsts == sorted(firsts)
            # maximality: every unpicked candidate overlaps a pick
            taken = set(sch.indices())
            assert all(set(s) & taken for s in sets if tuple(s) not in {p.indices for p in sch})
        for s in all_schedulers(xcx3(), _cands(sets)):
            assert _disjoint(s)


def test_stochastic_deterministic_per_seed():
    ct = xcx16()
    cands = pattern_matching(ct, XCX, math.inf)
    for seed in range(5):
        a = solve_conflicts(ct, cands, Policy("stochastic", seed=seed))
        b = solve_conflicts(ct, cands, Policy("stochastic", seed=seed))
        assert [(p.indices, p.rule_index) for p in a] == [(p.indices, p.rule_index) for p in b]


def test_stochastic_reaches_every_member():
    cands = _cands([(0, 1), (0, 2), (0, 3)])
    firsts = {solve_conflicts(xcx3(), cands, Policy("stochastic", seed=s)).picks[0].indices for s in range(40)}
    assert firsts == {(0, 1), (0, 2), (0, 3)}


def test_precise_dominates_greedy_and_stochastic():
    rng = random.Random(16)
    rules = list(XCX) + list(builtin_internal())
    tried = 0
    for _ in range(40):
        ct = random_circuit(rng, 3, 10, one=("X", "H", "Z", "S", "T"), two=("CX", "CZ"), p_two=0.4)
        cands = pattern_matching(ct, rules, math.inf)
        try:
            best = solve_conflicts(ct, cands, Policy("precise", queue_cap=2000))
        except SchedulerError:
            continue
        tried += 1
        d = depth(remove_identities(substitute(ct, best)))
        others = [Policy("greedy")] + [Policy("stochastic", seed=s) for s in range(16)]
        for p in others:
            assert d <= depth(remove_identities(substitute(ct, solve_conflicts(ct, cands, p))))
    assert tried >= 20


def test_queue_cap_error_advises_other_policies():
    sets = [(2 * i, 2 * i + 1) for i in range(12)] + [(2 * i + 1, 2 * i + 2) for i in range(12)]
    with pytest.raises(SchedulerError, match="greedy or stochastic"):
        solve_conflicts(xcx3(), _cands(sets), Policy("precise", queue_cap=5))
