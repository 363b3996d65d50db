"""Shared brute-force oracles for the test suite."""
from __future__ import annotations

import functools
import itertools
import math
import random

import numpy as np

from qrewrite.circuit import Circuit, gate_sequence, op
from qrewrite.matcher import SubsequenceTable, check_qubit_condition, default_delta

ALPHA = "abc"
GRID_MAXLEN = 12
GRID_MAXPAT = 4
GRID_DELTAS = (2, 4, math.inf)


def canonical_patterns(max_len: int = GRID_MAXPAT, alphabet: str = ALPHA) -> list[str]:
    """Patterns over the alphabet up to renaming of symbols (first-occurrence order).

    Both the DP and the enumeration only compare symbols for equality, so every
    pattern is covered by its canonical representative when the target strings
    range over the whole alphabet.
    """
    out = []

    def grow(prefix, used):
        if prefix:
            out.append(prefix)
        if len(prefix) == max_len:
            return
        for k in range(min(used + 1, len(alphabet))):
            grow(prefix + alphabet[k], max(used, k + 1))

    grow("", 0)
    return out


def _brute_new(p: str, delta: float, length: int):
    """For all strings of ``length`` symbols: bitmask of matches ending at the last position."""
    m = len(p)
    last = length - 1
    combos = [c + (last,) for c in itertools.combinations(range(last), m - 1)
              if last - (c[0] if c else last) < delta]
    bits = {c: k for k, c in enumerate(combos)}
    words = max(1, (len(combos) + 63) // 64)
    idx = np.arange(3 ** length)
    digits = np.stack([(idx // 3 ** (length - 1 - k)) % 3 for k in range(length)], axis=1)
    want = np.array([ALPHA.index(ch) for ch in p])
    table = np.zeros((3 ** length, words), dtype=np.uint64)
    for c, k in bits.items():
        mask = np.all(digits[:, list(c)] == want, axis=1)
        table[mask, k // 64] |= np.uint64(1) << np.uint64(k % 64)
    return bits, table


def dp_grid_mismatch(p: str, delta: float, max_len: int = GRID_MAXLEN) -> list:
    """Compare the incremental DP with enumeration on every string of length <= max_len.

    Walks the trie of all target strings; at each node the matches the DP adds
    must equal the enumerated index tuples ending at that position.  Returns a
    list of offending (length, string-index) pairs, empty on agreement.
    """
    bits, expect, got, hits = {}, {}, {}, {}
    for length in range(1, max_len + 1):
        bits[length], expect[length] = _brute_new(p, delta, length)
        got[length] = np.zeros_like(expect[length])
        hits[length] = []
    dp = SubsequenceTable(p, delta)
    bad = []

    def walk(length, index):
        for c in range(3):
            new = dp.push(ALPHA[c])
            j = index * 3 + c
            if new:
                table = bits[length + 1]
                sink = hits[length + 1]
                for t in new:
                    k = table.get(t)
                    if k is None:
                        bad.append((length + 1, j))
                    else:
                        sink.append((j, k))
            if length + 1 < max_len:
                walk(length + 1, j)
            dp.pop()

    walk(0, 0)
    for length, pairs in hits.items():
        if pairs:
            a = np.array(pairs, dtype=np.int64)
            np.bitwise_or.at(got[length], (a[:, 0], a[:, 1] // 64),
                             np.left_shift(np.uint64(1), (a[:, 1] % 64).astype(np.uint64)))
        rows = np.nonzero(np.any(got[length] != expect[length], axis=1))[0]
        bad.extend((length, int(r)) for r in rows[:5])
    return bad


@functools.lru_cache(maxsize=None)
def dp_grid_report() -> tuple[int, tuple]:
    """Run the full grid once per session: (configurations checked, failures)."""
    failures = []
    configs = 0
    for p in canonical_patterns():
        for delta in GRID_DELTAS:
            configs += 1
            bad = dp_grid_mismatch(p, delta)
            if bad:
                failures.append((p, delta, bad[:3]))
    return configs, tuple(failures)


def brute_matches(ct: Circuit, rules, delta=None):
    """Enumerate every index combination, then apply the symbol, span and qubit filters."""
    seq = gate_sequence(ct)
    out = []
    for ri, rule in enumerate(rules):
        pat = rule.sequence
        d = default_delta(len(pat)) if delta is None else delta
        for s in itertools.combinations(range(len(seq)), len(pat)):
            if any(seq[i] != ch for i, ch in zip(s, pat)):
                continue
            if s[-1] - s[0] >= d:
                continue
            res = check_qubit_condition(s, ct, rule)
            if res is not None:
                out.append((ri, s, tuple(sorted(res[0].items()))))
    return out


ONE_QUBIT = ("X", "Y", "Z", "H", "S", "SDG", "T", "TDG", "RX", "RY", "RZ")
TWO_QUBIT = ("CX", "CZ", "SWAP")
NICE_ANGLES = (math.pi / 4, -math.pi / 4, math.pi / 2, -math.pi / 2, math.pi, 0.7, -0.7)


def random_circuit(rng: random.Random, n: int, length: int, one=ONE_QUBIT, two=TWO_QUBIT,
                   three=("CCZ", "CCX"), p_two: float = 0.35, p_three: float = 0.05) -> Circuit:
    insts = []
    for _ in range(length):
        r = rng.random()
        if n >= 3 and r < p_three and three:
            insts.append(op(rng.choice(three), *rng.sample(range(n), 3)))
        elif n >= 2 and r < p_three + p_two and two:
            insts.append(op(rng.choice(two), *rng.sample(range(n), 2)))
        else:
            g = rng.choice(one)
            angles = (rng.choice(NICE_ANGLES),) if g.startswith("R") else ()
            insts.append(op(g, rng.randrange(n), angles=angles))
    return Circuit(n, insts)
