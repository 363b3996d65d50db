"""Reference circuits: the small worked examples and the Toffoli/arithmetic family.

Toffoli gates are written as H(target) CCZ H(target), the form in which the
arithmetic benchmarks enter the rewriter, with adjacent H pairs on a shared
target already cancelled.
"""
from __future__ import annotations

from typing import Callable

from .circuit import Circuit, Instruction, op


def _toffoli(a: int, b: int, t: int) -> list[Instruction]:
    return [op("H", t), op("CCZ", a, b, t), op("H", t)]


def _cancel_h_pairs(insts: list[Instruction]) -> list[Instruction]:
    """Drop H(q) H(q) pairs with no gate on q between them."""
    out: list[Instruction] = []
    last_on: dict[int, int] = {}
    for inst in insts:
        if inst.gate.name == "H":
            q = inst.qubits[0]
            k = last_on.get(q)
            if k is not None and out[k] is not None and out[k].gate.name == "H":
                out[k] = None
                del last_on[q]
                continue
        out.append(inst)
        for q in inst.qubits:
            last_on[q] = len(out) - 1
    return [i for i in out if i is not None]


def xcx3() -> Circuit:
    """Three-qubit X/CX example with sequence "xxcccxx"."""
    return Circuit(3, [op("X", 2), op("X", 2), op("CX", 0, 1), op("CX", 0, 2),
                       op("CX", 0, 1), op("X", 2), op("X", 0)])


_XCX16 = [
    ("X", 0), ("X", 1), ("X", 15), ("X", 0), ("CX", 13, 2), ("CX", 4, 12), ("CX", 5, 10),
    ("X", 2), ("X", 3), ("X", 13), ("X", 15), ("X", 11), ("CX", 9, 14), ("CX", 1, 7),
    ("CX", 9, 14), ("X", 5), ("X", 6), ("X", 8), ("X", 1), ("CX", 3, 8), ("CX", 3, 0),
    ("CX", 4, 9), ("X", 11), ("X", 8), ("X", 3), ("CX", 13, 3), ("CX", 13, 3), ("CX", 8, 11),
    ("X", 14), ("X", 5), ("X", 6), ("X", 8), ("X", 9), ("X", 11), ("CX", 5, 10), ("CX", 2, 6),
    ("CX", 7, 13),
]


def xcx16() -> Circuit:
    """16-qubit, 37-gate X/CX circuit (sequence "xxxxcccxxxxxcccxxxxcccxxxcccxxxxxxccc")."""
    return Circuit(16, [op(name, *qs) for name, *qs in _XCX16])


def toff_nc(k: int) -> Circuit:
    """k-control Toffoli as a V-chain of 2k-3 Toffolis over k-2 ancillas.

    Controls are qubits 0..k-1, the target is k, ancillas are k+1..2k-2.
    """
    if k < 3:
        raise ValueError("toff_nc needs k >= 3")
    ctrl = list(range(k))
    target = k
    anc = list(range(k + 1, 2 * k - 1))
    up = [(ctrl[0], ctrl[1], anc[0])]
    up += [(ctrl[i + 2], anc[i], anc[i + 1]) for i in range(k - 3)]
    middle = (ctrl[k - 1], anc[k - 3], target)
    insts: list[Instruction] = []
    for a, b, t in up + [middle] + up[::-1]:
        insts += _toffoli(a, b, t)
    return Circuit(2 * k - 1, insts)


def toff_barenco3() -> Circuit:
    """3-control Toffoli from four Toffolis with one borrowed ancilla (qubit 4)."""
    c0, c1, c2, t, a = 0, 1, 2, 3, 4
    insts = (_toffoli(c2, a, t) + _toffoli(c0, c1, a) + _toffoli(c2, a, t)
             + _toffoli(c0, c1, a))
    return Circuit(5, _cancel_h_pairs(insts))


def mod5_4() -> Circuit:
    """Five-qubit residue checker: one X, four Toffolis and two CNOTs onto qubit 4."""
    insts = [op("X", 4)]
    insts += _toffoli(0, 2, 4) + [op("CX", 3, 4)] + _toffoli(1, 3, 4)
    insts += [op("CX", 2, 4)] + _toffoli(0, 1, 4) + _toffoli(2, 3, 4)
    return Circuit(5, insts)


def vbe_adder3() -> Circuit:
    """Three-bit ripple-carry adder over (c0 a0 b0 c1 a1 b1 c2 a2 b2 c3)."""
    c = [0, 3, 6, 9]
    a = [1, 4, 7]
    b = [2, 5, 8]

    def carry(i):
        return _toffoli(a[i], b[i], c[i + 1]) + [op("CX", a[i], b[i])] + _toffoli(c[i], b[i], c[i + 1])

    def carry_inv(i):
        return _toffoli(c[i], b[i], c[i + 1]) + [op("CX", a[i], b[i])] + _toffoli(a[i], b[i], c[i + 1])

    def sum_(i):
        return [op("CX", a[i], b[i]), op("CX", c[i], b[i])]

    insts = carry(0) + carry(1) + carry(2)
    # the carry-out CNOT and the first CNOT of the top sum cancel
    insts += [op("CX", c[2], b[2])]
    insts += carry_inv(1) + sum_(1) + carry_inv(0) + sum_(0)
    return Circuit(10, _cancel_h_pairs(insts))


BENCHMARKS: dict[str, Callable[[], Circuit]] = {
    "xcx3": xcx3,
    "xcx16": xcx16,
    "toff-nc3": lambda: toff_nc(3),
    "toff-nc4": lambda: toff_nc(4),
    "toff-nc5": lambda: toff_nc(5),
    "toff-barenco3": toff_barenco3,
    "mod5-4": mod5_4,
    "vbe-adder3": vbe_adder3,
}

# (n, g, g0, g1) per Toffoli/arithmetic benchmark
REFERENCE_COUNTS = {
    "toff-nc3": (5, 9, 45, 135),
    "toff-nc4": (7, 15, 75, 225),
    "toff-nc5": (9, 21, 105, 315),
    "toff-barenco3": (5, 10, 58, 174),
    "mod5-4": (5, 15, 63, 187),
    "vbe-adder3": (10, 30, 150, 450),
}
