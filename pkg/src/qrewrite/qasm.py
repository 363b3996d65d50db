"""OpenQASM 2.0 subset reader/writer and the JSON rule-file format.

Rule files look like::

    {"rules": [{"name": "xcx",
                "pattern": [{"gate": "x", "qubits": [1]},
                            {"gate": "cx", "qubits": [0, 1]},
                            {"gate": "x", "qubits": [1]}],
                "substitution": [{"gate": "cx", "qubits": [0, 1]}]}]}

Angles are strings such as ``"pi/4"``, ``"-a"`` or ``"a+b"`` where lowercase
identifiers are variables bound by the pattern.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .circuit import Circuit, Instruction
from .gates import BY_QASM, GateKind, lookup


class QasmError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {msg}" if line else msg)


class RuleError(ValueError):
    pass


# ---------------------------------------------------------------- angle expressions

@dataclass(frozen=True)
class AngleExpr:
    """Linear angle form ``sum(coeff * var) + pi_coeff * pi + const``."""

    var_terms: tuple[tuple[str, Fraction], ...] = ()
    pi_coeff: Fraction = Fraction(0)
    const_term: Fraction = Fraction(0)

    @property
    def variables(self) -> dict[str, Fraction]:
        return dict(self.var_terms)

    @property
    def is_ground(self) -> bool:
        return not self.var_terms

    def ground_value(self) -> float:
        return float(self.pi_coeff) * math.pi + float(self.const_term)

    def evaluate(self, bindings: Mapping[str, float] | None = None) -> float:
        total = self.ground_value()
        for name, coeff in self.var_terms:
            if bindings is None or name not in bindings:
                raise KeyError(f"unbound angle variable {name!r}")
            total += float(coeff) * bindings[name]
        return total

    def _combine(self, other: "AngleExpr", sign: int) -> "AngleExpr":
        terms = dict(self.var_terms)
        for name, coeff in other.var_terms:
            terms[name] = terms.get(name, Fraction(0)) + sign * coeff
        return AngleExpr(tuple(sorted((k, v) for k, v in terms.items() if v != 0)),
                         self.pi_coeff + sign * other.pi_coeff,
                         self.const_term + sign * other.const_term)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, k: Fraction) -> "AngleExpr":
        return AngleExpr(tuple((n, c * k) for n, c in self.var_terms if c * k != 0),
                         self.pi_coeff * k, self.const_term * k)

    def __str__(self):
        parts = []
        for name, c in self.var_terms:
            parts.append(_coeff_str(c, name))
        if self.pi_coeff:
            parts.append(_coeff_str(self.pi_coeff, "pi"))
        if self.const_term or not parts:
            parts.append(str(self.const_term))
        s = "+".join(parts)
        return s.replace("+-", "-")


def _coeff_str(c: Fraction, sym: str) -> str:
    if c == 1:
        return sym
    if c == -1:
        return "-" + sym
    if c.denominator == 1:
        return f"{c.numerator}*{sym}"
    if c.numerator in (1, -1):
        return f"{'-' if c < 0 else ''}{sym}/{c.denominator}"
    return f"{c.numerator}*{sym}/{c.denominator}"


_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)"
                    r"|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _ExprParser:
    def __init__(self, text: str, allow_vars: bool):
        self.text = text
        self.allow_vars = allow_vars
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            num, ident, sym = m.groups()
            if num is not None:
                self.tokens.append(("num", num, m.start(1)))
            elif ident is not None:
                self.tokens.append(("id", ident, m.start(2)))
            elif sym is not None:
                self.tokens.append(("sym", sym, m.start(3)))
            pos = m.end()
        self.i = 0

    def error(self, msg):
        raise ValueError(f"{msg} in angle expression {self.text!r}")

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self, sym=None):
        tok = self.peek()
        if sym is not None and tok[1] != sym:
            self.error(f"expected {sym!r}")
        self.i += 1
        return tok

    def parse(self) -> AngleExpr:
        if not self.tokens:
            self.error("empty")
        e = self.expr()
        if self.i != len(self.tokens):
            self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self) -> AngleExpr:
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> AngleExpr:
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                if e.is_ground and not e.pi_coeff:
                    e = rhs.scale(e.const_term)
                elif rhs.is_ground and not rhs.pi_coeff:
                    e = e.scale(rhs.const_term)
                else:
                    self.error("non-linear product")
            else:
                if not (rhs.is_ground and not rhs.pi_coeff) or rhs.const_term == 0:
                    self.error("division by a non-constant or zero")
                e = e.scale(1 / rhs.const_term)
        return e

    def unary(self) -> AngleExpr:
        kind, val, _ = self.peek()
        if val == "-":
            self.take()
            return self.unary().scale(Fraction(-1))
        if val == "+":
            self.take()
            return self.unary()
        if val == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if kind == "num":
            self.take()
            return AngleExpr(const_term=Fraction(val))
        if kind == "id":
            self.take()
            if val == "pi":
                return AngleExpr(pi_coeff=Fraction(1))
            if not self.allow_vars:
                self.error(f"unknown identifier {val!r}")
            if not re.fullmatch(r"[a-z][a-z0-9_]*", val):
                self.error(f"variable names must be lowercase identifiers, got {val!r}")
            return AngleExpr(var_terms=((val, Fraction(1)),))
        self.error("unexpected end" if kind is None else f"unexpected {val!r}")


def parse_angle(text: str, allow_vars: bool = True) -> AngleExpr:
    return _ExprParser(str(text), allow_vars).parse()


def format_angle(x: float) -> str:
    """Print ``x`` as a rational multiple of pi when possible, else with 17 digits."""
    if x == 0:
        return "0"
    for q in range(1, 97):
        p = round(x * q / math.pi)
        if p and abs(x - p * math.pi / q) <= 1e-12:
            return _coeff_str(Fraction(p, q), "pi")
    return f"{x:.17g}"


# ---------------------------------------------------------------- QASM

_STMT_GATE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*(.*)$", re.S)
_ARG = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]\s*$")
_U_GATES = {"U2", "U3"}


def _statements(text: str):
    """Yield (statement, line, col) with comments stripped."""
    clean = re.sub(r"//[^\n]*", lambda m: " " * len(m.group()), text)
    start = 0
    for m in re.finditer(";", clean):
        raw = clean[start:m.start()]
        stripped = raw.strip()
        if stripped:
            offset = start + (len(raw) - len(raw.lstrip()))
            line = clean.count("\n", 0, offset) + 1
            col = offset - (clean.rfind("\n", 0, offset) + 1) + 1
            yield stripped, line, col
        start = m.end()
    tail = clean[start:]
    if tail.strip():
        offset = start + (len(tail) - len(tail.lstrip()))
        line = clean.count("\n", 0, offset) + 1
        col = offset - (clean.rfind("\n", 0, offset) + 1) + 1
        raise QasmError("missing ';'", line, col)


def parse_qasm(text: str, allow_u23: bool = False) -> Circuit:
    """Parse the supported OpenQASM 2.0 subset into a :class:`Circuit`.

    Multiple ``qreg`` declarations are flattened into one index space in
    declaration order.  ``u2``/``u3`` are only accepted with ``allow_u23``.
    """
    regs: dict[str, tuple[int, int]] = {}
    n = 0
    ops: list[Instruction] = []
    seen_header = False
    for stmt, line, col in _statements(text):
        head = stmt.split(None, 1)[0] if stmt.split() else ""
        if not seen_header:
            if not re.fullmatch(r"OPENQASM\s+2(\.0)?", stmt):
                raise QasmError("expected 'OPENQASM 2.0;' header", line, col)
            seen_header = True
            continue
        if head == "include":
            continue
        if head == "qreg":
            m = re.fullmatch(r"qreg\s+([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]", stmt)
            if not m:
                raise QasmError("malformed qreg declaration", line, col)
            name, size = m.group(1), int(m.group(2))
            if name in regs:
                raise QasmError(f"register {name!r} redeclared", line, col)
            regs[name] = (n, size)
            n += size
            continue
        if head in ("creg", "measure", "barrier", "reset", "if") or stmt.startswith("measure"):
            raise QasmError("non-unitary statement unsupported", line, col)
        if head in ("gate", "opaque"):
            raise QasmError("custom gate definitions unsupported", line, col)
        m = _STMT_GATE.match(stmt)
        if not m:
            raise QasmError("syntax error", line, col)
        mnemonic, params, args = m.groups()
        gate = BY_QASM.get(mnemonic)
        if gate is None:
            raise QasmError(f"unknown gate {mnemonic!r}", line, col)
        if gate.name in _U_GATES and not allow_u23:
            raise QasmError(f"{mnemonic} needs a rule set translating it", line, col)
        angles = []
        if params is not None and params.strip():
            for p in _split_top(params):
                try:
                    angles.append(parse_angle(p, allow_vars=False).ground_value())
                except ValueError as e:
                    raise QasmError(str(e), line, col) from None
        if len(angles) != gate.angle_arity:
            raise QasmError(f"{mnemonic} takes {gate.angle_arity} parameters", line, col)
        qubits = []
        for a in args.split(","):
            am = _ARG.match(a)
            if not am:
                raise QasmError(f"malformed qubit argument {a.strip()!r}", line, col)
            reg, idx = am.group(1), int(am.group(2))
            if reg not in regs:
                raise QasmError(f"unknown register {reg!r}", line, col)
            off, size = regs[reg]
            if idx >= size:
                raise QasmError(f"qubit index {reg}[{idx}] out of range", line, col)
            qubits.append(off + idx)
        try:
            ops.append(Instruction(gate, tuple(qubits), tuple(angles)))
        except ValueError as e:
            raise QasmError(str(e), line, col) from None
    if not seen_header:
        raise QasmError("empty program", 1, 1)
    return Circuit(n, ops)


def _split_top(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += (ch == "(") - (ch == ")")
        cur += ch
    out.append(cur)
    return out


def serialize_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    for ins in c:
        args = ",".join(f"q[{q}]" for q in ins.qubits)
        if ins.angles:
            params = ",".join(format_angle(a) for a in ins.angles)
            lines.append(f"{ins.gate.qasm}({params}) {args};")
        else:
            lines.append(f"{ins.gate.qasm} {args};")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- rules

@dataclass(frozen=True)
class InstructionTemplate:
    gate: GateKind
    qubits: tuple[int, ...]
    angles: tuple[AngleExpr, ...] = ()

    def instantiate(self, mapping: Mapping[int, int], bindings: Mapping[str, float]) -> Instruction:
        return Instruction(self.gate, tuple(mapping[q] for q in self.qubits),
                           tuple(a.evaluate(bindings) for a in self.angles))

    def to_json(self) -> dict:
        d = {"gate": self.gate.name, "qubits": list(self.qubits)}
        if self.angles:
            d["angles"] = [str(a) for a in self.angles]
        return d


@dataclass(frozen=True)
class RuleSpec:
    """A rewrite rule ``pattern = substitution`` over pattern-local qubits ``0..k-1``."""

    name: str
    pattern: tuple[InstructionTemplate, ...]
    substitution: tuple[InstructionTemplate, ...]
    num_qubits: int = field(default=0)

    @property
    def sequence(self) -> str:
        return "".join(t.gate.alias for t in self.pattern)

    def variables(self) -> set[str]:
        return {v for t in self.pattern for a in t.angles for v, _ in a.var_terms}

    def to_json(self) -> dict:
        return {"name": self.name,
                "pattern": [t.to_json() for t in self.pattern],
                "substitution": [t.to_json() for t in self.substitution]}

    def __repr__(self):
        return f"RuleSpec({self.name!r}, {self.sequence!r})"


def _template(entry, where: str) -> InstructionTemplate:
    if not isinstance(entry, dict) or "gate" not in entry or "qubits" not in entry:
        raise RuleError(f"{where}: expected an object with 'gate' and 'qubits'")
    try:
        gate = lookup(str(entry["gate"]))
    except KeyError:
        raise RuleError(f"{where}: unknown gate {entry['gate']!r}") from None
    qubits = entry["qubits"]
    if (not isinstance(qubits, list) or not all(isinstance(q, int) and q >= 0 for q in qubits)):
        raise RuleError(f"{where}: qubits must be a list of non-negative integers")
    if len(qubits) != gate.arity or len(set(qubits)) != len(qubits):
        raise RuleError(f"{where}: {gate.name} needs {gate.arity} distinct qubits")
    raw = entry.get("angles", [])
    if len(raw) != gate.angle_arity:
        raise RuleError(f"{where}: {gate.name} needs {gate.angle_arity} angles")
    try:
        angles = tuple(parse_angle(a) for a in raw)
    except ValueError as e:
        raise RuleError(f"{where}: {e}") from None
    return InstructionTemplate(gate, tuple(qubits), angles)


def make_rule(name: str, pattern: Iterable[InstructionTemplate],
              substitution: Iterable[InstructionTemplate]) -> RuleSpec:
    """Build a rule and check its invariants."""
    pattern, substitution = tuple(pattern), tuple(substitution)
    if not pattern:
        raise RuleError(f"rule {name!r}: empty pattern")
    pq = {q for t in pattern for q in t.qubits}
    if pq != set(range(len(pq))):
        raise RuleError(f"rule {name!r}: pattern qubits {sorted(pq)} are not contiguous from 0")
    sq = {q for t in substitution for q in t.qubits}
    if not sq <= pq:
        raise RuleError(f"rule {name!r}: substitution uses qubits {sorted(sq - pq)} absent from the pattern")
    bound = set()
    for t in pattern:
        for a in t.angles:
            if len(a.var_terms) > 1:
                raise RuleError(f"rule {name!r}: at most one variable per pattern angle")
            bound.update(v for v, _ in a.var_terms)
    for t in substitution:
        for a in t.angles:
            free = {v for v, _ in a.var_terms} - bound
            if free:
                raise RuleError(f"rule {name!r}: unbound substitution variable(s) {sorted(free)}")
    return RuleSpec(name, pattern, substitution, len(pq))


def rules_from_data(doc) -> list[RuleSpec]:
    if not isinstance(doc, dict) or not isinstance(doc.get("rules"), list):
        raise RuleError("malformed rule document: expected {'rules': [...]}")
    out = []
    for k, entry in enumerate(doc["rules"]):
        if not isinstance(entry, dict):
            raise RuleError(f"rule #{k}: expected an object")
        name = str(entry.get("name", f"rule{k}"))
        pat = entry.get("pattern")
        sub = entry.get("substitution", [])
        if not isinstance(pat, list) or not isinstance(sub, list):
            raise RuleError(f"rule {name!r}: pattern and substitution must be lists")
        out.append(make_rule(name,
                             [_template(e, f"rule {name!r} pattern[{i}]") for i, e in enumerate(pat)],
                             [_template(e, f"rule {name!r} substitution[{i}]") for i, e in enumerate(sub)]))
    return out


def parse_rules(text: str) -> list[RuleSpec]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise RuleError(f"malformed rule document: {e}") from None
    return rules_from_data(doc)


def dump_rules(rules: Iterable[RuleSpec], name: str | None = None) -> str:
    """Serialize rules one per line so diffs of rule files stay readable."""
    body = ",\n".join("  " + json.dumps(r.to_json()) for r in rules)
    head = f'{{"name": {json.dumps(name)},\n "rules": [\n' if name else '{"rules": [\n'
    return head + body + "\n]}\n"
