"""Gate registry: canonical names, single-character aliases, arities and qubit roles.

A qubit role says how a gate acts on one of its operands.  ``control`` means the
gate is diagonal in the Z basis on that qubit, ``target`` means it is diagonal in
the X basis there.  Qubits carrying both roles (H, Y, R_y, SWAP) block every
commutation through them.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GateKind:
    name: str
    alias: str
    arity: int
    angle_arity: int = 0
    control_slots: frozenset[int] = frozenset()
    target_slots: frozenset[int] = frozenset()
    is_identity: bool = False
    qasm: str = ""

    def controls(self, qubits) -> set[int]:
        return {qubits[k] for k in self.control_slots}

    def targets(self, qubits) -> set[int]:
        return {qubits[k] for k in self.target_slots}


def _k(name, alias, arity, angles=0, ctrl=(), targ=(), qasm=None, identity=False):
    return GateKind(name, alias, arity, angles, frozenset(ctrl), frozenset(targ),
                    identity, qasm or name)


_BOTH = (0,)

# Order follows the alias table, SWAP and the u-gates come last.
GATES: tuple[GateKind, ...] = (
    _k("I", "I", 1, qasm="id", identity=True),
    _k("H", "h", 1, ctrl=_BOTH, targ=_BOTH, qasm="h"),
    _k("X", "x", 1, targ=(0,), qasm="x"),
    _k("Y", "y", 1, ctrl=_BOTH, targ=_BOTH, qasm="y"),
    _k("Z", "z", 1, ctrl=(0,), qasm="z"),
    _k("T", "t", 1, ctrl=(0,), qasm="t"),
    _k("TDG", "T", 1, ctrl=(0,), qasm="tdg"),
    _k("S", "s", 1, ctrl=(0,), qasm="s"),
    _k("SDG", "S", 1, ctrl=(0,), qasm="sdg"),
    _k("RX", "X", 1, 1, targ=(0,), qasm="rx"),
    _k("RY", "Y", 1, 1, ctrl=_BOTH, targ=_BOTH, qasm="ry"),
    _k("RZ", "Z", 1, 1, ctrl=(0,), qasm="rz"),
    _k("CX", "c", 2, ctrl=(0,), targ=(1,), qasm="cx"),
    _k("CZ", "C", 2, ctrl=(0, 1), qasm="cz"),
    _k("CCZ", "E", 3, ctrl=(0, 1, 2), qasm="ccz"),
    _k("CCX", "F", 3, ctrl=(0, 1), targ=(2,), qasm="ccx"),
    _k("SWAP", "w", 2, ctrl=(0, 1), targ=(0, 1), qasm="swap"),
    _k("U1", "1", 1, 1, ctrl=(0,), qasm="u1"),
    _k("U2", "2", 1, 2, ctrl=_BOTH, targ=_BOTH, qasm="u2"),
    _k("U3", "3", 1, 3, ctrl=_BOTH, targ=_BOTH, qasm="u3"),
)

BY_NAME: dict[str, GateKind] = {g.name: g for g in GATES}
BY_ALIAS: dict[str, GateKind] = {g.alias: g for g in GATES}
BY_QASM: dict[str, GateKind] = {g.qasm: g for g in GATES}

# Lower-case spellings accepted in rule files, next to canonical names.
_SPELLINGS = {
    "i": "I", "id": "I", "h": "H", "x": "X", "y": "Y", "z": "Z", "t": "T", "tdg": "TDG",
    "s": "S", "sdg": "SDG", "rx": "RX", "ry": "RY", "rz": "RZ", "cx": "CX", "cnot": "CX",
    "cz": "CZ", "ccz": "CCZ", "ccx": "CCX", "toffoli": "CCX", "swap": "SWAP",
    "u1": "U1", "u2": "U2", "u3": "U3",
}

G_SUR = frozenset({"X", "Y", "RX", "RY", "CZ"})
G_COM = frozenset({"H", "X", "Y", "Z", "S", "SDG", "T", "TDG", "RZ", "CX"})
G_IBM = frozenset({"U1", "U2", "U3", "CX"})


def lookup(name: str) -> GateKind:
    """Resolve a canonical name, a QASM mnemonic or a rule-file spelling."""
    if name in BY_NAME:
        return BY_NAME[name]
    key = _SPELLINGS.get(name.lower())
    if key is None:
        raise KeyError(f"unknown gate {name!r}")
    return BY_NAME[key]
