"""Command-line front end: match, rewrite, optimize, stats, verify, gen."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .circuit import Circuit, depth, metrics
from .matcher import pattern_matching
from .oracle import CapacityError, circuits_equivalent, gen_circuit
from .qasm import QasmError, RuleError, parse_qasm, serialize_qasm
from .rewriter import optimize
from .rules import RuleSet, builtin_internal, load_ruleset
from .scheduler import Policy, SchedulerError

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_VERIFY, EXIT_CAPACITY = 0, 1, 2, 3, 4
SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _delta(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid delta {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("delta must be >= 1")
    return value


def _read_circuit(path: str, allow_u23: bool) -> Circuit:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    try:
        return parse_qasm(text, allow_u23=allow_u23)
    except QasmError as exc:
        raise QasmError(f"{path}:{exc}") from None


def _rules(spec: str, kind: str = "external") -> RuleSet:
    try:
        return load_ruleset(spec, kind)
    except OSError as exc:
        raise UsageError(f"cannot read rules {spec}: {exc.strerror}")


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _write_out(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_match(args) -> int:
    c = _read_circuit(args.circuit, args.allow_u23)
    rules = _rules(args.rules)
    cands = pattern_matching(c, rules, args.delta)
    _emit({
        "schema": SCHEMA,
        "candidates": [
            {"rule": m.rule.name, "rule_index": m.rule_index, "indices": list(m.indices),
             "mapping": {str(k): v for k, v in sorted(m.mapping.items())},
             "bindings": dict(sorted(m.bindings.items()))}
            for m in cands
        ],
    })
    return EXIT_OK


def cmd_rewrite(args) -> int:
    c = _read_circuit(args.circuit, args.allow_u23)
    external = _rules(args.rules)
    internal = None if args.no_internal else builtin_internal()
    tries = args.tries if args.policy == "stochastic" else 1
    if tries < 1:
        raise UsageError("--tries must be >= 1")
    best = None
    for k in range(tries):
        policy = Policy(args.policy, seed=args.seed + k, queue_cap=args.queue_cap)
        out, report = optimize(c, internal, external, policy, args.rounds, args.delta)
        key = (depth(out), len(out), k)
        if best is None or key < best[0]:
            best = (key, out, report)
    (_, _, k), out, report = best
    text = serialize_qasm(out)
    if args.output is None:
        sys.stdout.write(text)
        sink = sys.stderr
    else:
        Path(args.output).write_text(text)
        sink = sys.stdout
    sink.write(report.to_jsonl())
    summary = {"schema": SCHEMA, "policy": args.policy, "seed": args.seed + k, "try": k,
               "input": metrics(c).as_dict(), "output": metrics(out).as_dict()}
    sink.write(json.dumps(summary, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    c = _read_circuit(args.circuit, args.allow_u23)
    _emit({"schema": SCHEMA, **metrics(c).as_dict()})
    return EXIT_OK


def cmd_verify(args) -> int:
    a = _read_circuit(args.a, True)
    b = _read_circuit(args.b, True)
    ok = circuits_equivalent(a, b, args.tol)
    _emit({"schema": SCHEMA, "equivalent": ok, "tol": args.tol})
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_gen(args) -> int:
    try:
        c = gen_circuit(args.qubits, args.layers, args.d1, args.d2, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    _write_out(args.output, serialize_qasm(c))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qrewrite", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("match", help="list replacement candidates as JSON")
    m.add_argument("circuit")
    m.add_argument("--rules", required=True)
    m.add_argument("--delta", type=_delta, default=None)
    m.add_argument("--allow-u23", action="store_true")
    m.set_defaults(func=cmd_match)

    for name, internal_default in (("rewrite", True), ("optimize", True)):
        r = sub.add_parser(name, help="rewrite a circuit with a rule set")
        r.add_argument("circuit")
        r.add_argument("--rules", required=True)
        r.add_argument("--policy", choices=("precise", "greedy", "stochastic"), default="greedy")
        r.add_argument("--seed", type=int, default=0)
        r.add_argument("--tries", type=int, default=5)
        r.add_argument("--delta", type=_delta, default=None)
        r.add_argument("--rounds", type=int, default=5)
        r.add_argument("--queue-cap", type=int, default=10_000)
        r.add_argument("--no-internal", action="store_true", default=not internal_default)
        r.add_argument("--allow-u23", action="store_true")
        r.add_argument("-o", "--output")
        r.set_defaults(func=cmd_rewrite)

    s = sub.add_parser("stats", help="circuit metrics as JSON")
    s.add_argument("circuit")
    s.add_argument("--allow-u23", action="store_true")
    s.set_defaults(func=cmd_stats)

    v = sub.add_parser("verify", help="check equivalence up to global phase")
    v.add_argument("a")
    v.add_argument("b")
    v.add_argument("--tol", type=float, default=1e-9)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="random circuit with given densities")
    g.add_argument("--qubits", type=int, required=True)
    g.add_argument("--layers", type=int, required=True)
    g.add_argument("--d1", type=float, required=True)
    g.add_argument("--d2", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "rounds", 1) < 1:
        print("qrewrite: error: --rounds must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qrewrite: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QasmError, RuleError, json.JSONDecodeError) as exc:
        print(f"qrewrite: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"qrewrite: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except SchedulerError as exc:
        print(f"qrewrite: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
