"""Instructions, circuits and circuit metrics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .gates import GateKind, lookup

ANGLE_TOL = 1e-9


def canonical_angle(theta: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    if not math.isfinite(theta):
        raise ValueError(f"non-finite angle {theta!r}")
    r = math.remainder(theta, 2 * math.pi)
    if r <= -math.pi + 1e-15:
        r += 2 * math.pi
    return r


def angles_close(a: float, b: float, tol: float = ANGLE_TOL) -> bool:
    return abs(math.remainder(a - b, 2 * math.pi)) <= tol


@dataclass(frozen=True)
class Instruction:
    """One gate application: gate kind, operation qubits, rotation angles."""

    gate: GateKind
    qubits: tuple[int, ...]
    angles: tuple[float, ...] = ()

    def __post_init__(self):
        if isinstance(self.gate, str):
            object.__setattr__(self, "gate", lookup(self.gate))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "angles", tuple(canonical_angle(float(a)) for a in self.angles))
        if len(self.qubits) != self.gate.arity:
            raise ValueError(f"{self.gate.name} takes {self.gate.arity} qubits, got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.gate.name}{self.qubits}")
        if len(self.angles) != self.gate.angle_arity:
            raise ValueError(f"{self.gate.name} takes {self.gate.angle_arity} angles")

    @property
    def alias(self) -> str:
        return self.gate.alias

    def controls(self) -> set[int]:
        return self.gate.controls(self.qubits)

    def targets(self) -> set[int]:
        return self.gate.targets(self.qubits)

    def same_as(self, other: "Instruction", tol: float = ANGLE_TOL) -> bool:
        return (self.gate is other.gate and self.qubits == other.qubits
                and all(angles_close(a, b, tol) for a, b in zip(self.angles, other.angles)))

    def __repr__(self):
        args = ",".join(map(str, self.qubits))
        if self.angles:
            return f"{self.gate.name}({', '.join(f'{a:.6g}' for a in self.angles)})[{args}]"
        return f"{self.gate.name}[{args}]"


def op(name: str, *qubits: int, angles: Sequence[float] = ()) -> Instruction:
    """Shorthand constructor: ``op("CX", 0, 1)``, ``op("RZ", 2, angles=[pi/4])``."""
    return Instruction(lookup(name), tuple(qubits), tuple(angles))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    instructions: tuple[Instruction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        for ins in self.instructions:
            for q in ins.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"qubit {q} out of range for {self.num_qubits}-qubit circuit")

    def __len__(self):
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __getitem__(self, i):
        return self.instructions[i]

    def with_instructions(self, instructions: Iterable[Instruction]) -> "Circuit":
        return Circuit(self.num_qubits, tuple(instructions))

    def same_as(self, other: "Circuit", tol: float = ANGLE_TOL) -> bool:
        return (self.num_qubits == other.num_qubits and len(self) == len(other)
                and all(a.same_as(b, tol) for a, b in zip(self, other)))


def gate_sequence(c: Circuit) -> str:
    """The alias string of a circuit, one character per instruction."""
    return "".join(ins.gate.alias for ins in c.instructions)


def remove_identities(c: Circuit) -> Circuit:
    return c.with_instructions(ins for ins in c if not ins.gate.is_identity)


def layers(c: Circuit) -> list[int]:
    """ASAP layer of every instruction (0 for identity gates)."""
    front = [0] * c.num_qubits
    out = []
    for ins in c:
        if ins.gate.is_identity:
            out.append(0)
            continue
        layer = 1 + max(front[q] for q in ins.qubits)
        for q in ins.qubits:
            front[q] = layer
        out.append(layer)
    return out


def depth(c: Circuit) -> int:
    return max(layers(c), default=0)


@dataclass(frozen=True)
class CircuitMetrics:
    """Counts, depth and gate density vector.

    ``m2`` counts 2-qubit gates and ``m3`` 3-qubit gates; the 2-qubit density uses
    every multi-qubit gate, i.e. ``d2 = 2 * (m2 + m3) / (n * l)``.
    """

    n: int
    total: int
    m1: int
    m2: int
    m3: int
    depth: int
    d1: Fraction
    d2: Fraction

    @property
    def l(self) -> int:
        return self.depth

    def as_dict(self) -> dict:
        return {"n": self.n, "gates": self.total, "m1": self.m1, "m2": self.m2, "m3": self.m3,
                "depth": self.depth, "d1": float(self.d1), "d2": float(self.d2)}


def metrics(c: Circuit) -> CircuitMetrics:
    counts = {1: 0, 2: 0, 3: 0}
    for ins in c:
        if not ins.gate.is_identity:
            counts[ins.gate.arity] += 1
    d = depth(c)
    total = sum(counts.values())
    if total == 0:
        d1 = d2 = Fraction(0)
    else:
        d1 = Fraction(counts[1], c.num_qubits * d)
        d2 = Fraction(2 * (counts[2] + counts[3]), c.num_qubits * d)
    return CircuitMetrics(c.num_qubits, total, counts[1], counts[2], counts[3], d, d1, d2)
