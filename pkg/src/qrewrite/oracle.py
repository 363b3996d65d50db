"""Ground-truth engines: dense unitaries, exhaustive subsequence enumeration and a
density-parameterised random circuit generator ("BIGD-like")."""
from __future__ import annotations

import itertools
import math
import random
from typing import Sequence

import numpy as np

from .circuit import Circuit, Instruction
from .gates import lookup

MAX_QUBITS = 10
MAX_BRUTE_LEN = 20


class CapacityError(ValueError):
    """Raised when an oracle is asked for more than it can enumerate or simulate."""


_S2 = 1 / math.sqrt(2)
_FIXED = {
    "I": np.eye(2),
    "H": np.array([[1, 1], [1, -1]]) * _S2,
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]),
    "TDG": np.diag([1, np.exp(-1j * math.pi / 4)]),
    "CX": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "CZ": np.diag([1, 1, 1, -1]),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
    "CCZ": np.diag([1, 1, 1, 1, 1, 1, 1, -1]),
}
_ccx = np.eye(8)
_ccx[6:, 6:] = [[0, 1], [1, 0]]
_FIXED["CCX"] = _ccx


def _u3(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s],
                     [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]])


def gate_matrix(name: str, angles: Sequence[float] = ()) -> np.ndarray:
    """Matrix of a gate; qubit slot 0 is the most significant index bit."""
    if name in _FIXED:
        return np.asarray(_FIXED[name], dtype=complex)
    if name == "RX":
        (t,) = angles
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if name == "RY":
        (t,) = angles
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if name == "RZ":
        (t,) = angles
        return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
    if name == "U1":
        (lam,) = angles
        return np.diag([1, np.exp(1j * lam)])
    if name == "U2":
        phi, lam = angles
        return _u3(math.pi / 2, phi, lam)
    if name == "U3":
        return _u3(*angles)
    raise KeyError(f"no matrix for gate {name!r}")


def apply_instruction(state: np.ndarray, ins: Instruction, n: int) -> np.ndarray:
    """Left-multiply ``state`` (shape ``(2,)*n + rest``) by one gate."""
    k = ins.gate.arity
    m = gate_matrix(ins.gate.name, ins.angles).reshape((2,) * (2 * k))
    axes = list(ins.qubits)
    out = np.tensordot(m, state, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the gate's output axes first; move them back in place.
    return np.moveaxis(out, list(range(k)), axes)


def circuit_unitary(c: Circuit) -> np.ndarray:
    n = c.num_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"oracle capacity exceeded: {n} qubits > {MAX_QUBITS}")
    dim = 2 ** n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for ins in c:
        if ins.gate.is_identity:
            continue
        u = apply_instruction(u, ins, n)
    return u.reshape(dim, dim)


def equiv_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff ``a`` equals ``b`` times a unit-modulus scalar, Frobenius norm within tol*dim."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(a[k]) == 0 or abs(b[k]) == 0:
        return bool(np.linalg.norm(a - b) <= tol * a.shape[0])
    phase = a[k] / b[k]
    phase /= abs(phase)
    return bool(np.linalg.norm(a - phase * b) <= tol * a.shape[0])


def circuits_equivalent(a: Circuit, b: Circuit, tol: float = 1e-9) -> bool:
    n = max(a.num_qubits, b.num_qubits)
    a = Circuit(n, a.instructions)
    b = Circuit(n, b.instructions)
    return equiv_up_to_phase(circuit_unitary(a), circuit_unitary(b), tol)


def brute_subsequences(gt: str, gp: str, delta: int | None = None) -> set[tuple[int, ...]]:
    """Every index tuple spelling ``gp`` inside ``gt`` with span ``last - first < delta``."""
    if not gp:
        raise ValueError("empty pattern")
    if len(gt) > MAX_BRUTE_LEN:
        raise CapacityError(f"brute force limited to {MAX_BRUTE_LEN} symbols")
    out = set()
    for idx in itertools.combinations(range(len(gt)), len(gp)):
        if all(gt[i] == ch for i, ch in zip(idx, gp)):
            if delta is None or idx[-1] - idx[0] < delta:
                out.add(idx)
    return out


DEFAULT_1Q = ("X", "H", "Z", "S", "T")
DEFAULT_2Q = ("CX",)


def _spread(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    # Bresenham-style placement of the remainder keeps the layers even.
    return [base + ((i + 1) * extra // parts - i * extra // parts) for i in range(parts)]


def gen_circuit(n: int, layers: int, d1: float, d2: float, seed: int = 0,
                one_qubit: Sequence[str] = DEFAULT_1Q,
                two_qubit: Sequence[str] = DEFAULT_2Q) -> Circuit:
    """Random layered circuit whose density vector approximates ``(d1, d2)``.

    Each layer holds disjoint gates and one gate per layer is chained to the
    previous layer, so the dependency chain equals ``layers`` whenever every
    layer is populated.
    """
    if n < 1 or layers < 0:
        raise ValueError("need n >= 1 and layers >= 0")
    if d1 < 0 or d2 < 0 or d1 + d2 > 1 + 1e-9:
        raise ValueError(f"infeasible densities ({d1}, {d2})")
    if d2 > 0 and n < 2:
        raise ValueError("2-qubit density needs at least 2 qubits")
    rng = random.Random(seed)
    slots = n * layers
    m1 = round(d1 * slots)
    m2 = round(d2 * slots / 2)
    if m1 == 0 and m2 == 0:
        return Circuit(n)
    one = _spread(m1, layers)
    two = _spread(m2, layers)
    ops: list[Instruction] = []
    prev: list[int] = []
    for k in range(layers):
        a, b = one[k], two[k]
        if a + 2 * b > n:
            raise ValueError(f"infeasible densities ({d1}, {d2}) for {n} qubits")
        free = list(range(n))
        rng.shuffle(free)
        if prev and (a or b):
            spine = rng.choice(prev)
            free.remove(spine)
            free.insert(0, spine)
        kinds = ["2"] * b + ["1"] * a
        rng.shuffle(kinds)
        used = []
        for kind in kinds:
            if kind == "2":
                qs = (free.pop(0), free.pop(0))
                ops.append(Instruction(lookup(rng.choice(two_qubit)), qs))
            else:
                qs = (free.pop(0),)
                g = lookup(rng.choice(one_qubit))
                angles = tuple(rng.uniform(-math.pi, math.pi) for _ in range(g.angle_arity))
                ops.append(Instruction(g, qs, angles))
            used.extend(qs)
        prev = used or prev
    return Circuit(n, ops)
