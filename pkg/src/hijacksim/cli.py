"""Command-line interface.

Subcommands: validate, simulate, find, gadget, verify.  Every command emits
a run report (text or JSON) echoing the command and the SHA-256 digests of
its input files, so identical invocations produce byte-identical output.
Exit codes: 0 success / attack found / suite passed; 1 well-formed negative
verdict (invalid graph, no attack, suite failure); 2 usage or input errors.
"""

import argparse
import hashlib
import json
import os
import sys

from .attacks import strategy_from_json, strategy_to_json_dict
from .errors import HijacksimError
from .finders import find_origin_spoofing, find_sbgp_bruteforce, oracle_origin_spoofing
from .gadgets import gen_gadget_origin, gen_gadget_sbgp, parse_dimacs
from .graph import parse_graph, validate_graph
from .routing import simulate
from .verify import SUITE_NAMES, run_suite


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


class Report:
    def __init__(self, command, inputs):
        self.command = command
        self.inputs = {p: _digest(p) for p in inputs}
        self.result = {}
        self.exit_code = 0

    def emit(self, fmt, stream=None):
        stream = stream if stream is not None else sys.stdout
        if fmt == "json":
            payload = {
                "command": self.command,
                "inputs": self.inputs,
                "result": self.result,
                "exit_code": self.exit_code,
            }
            stream.write(json.dumps(payload, indent=2) + "\n")
        else:
            stream.write("command: %s\n" % " ".join(self.command))
            for path in sorted(self.inputs):
                stream.write("input %s sha256=%s\n" % (path, self.inputs[path]))
            for key in self.result:
                value = self.result[key]
                if isinstance(value, str) and "\n" in value:
                    stream.write("%s:\n%s" % (key, value))
                    if not value.endswith("\n"):
                        stream.write("\n")
                else:
                    stream.write("%s: %s\n" % (key, _plain(value)))
            stream.write("exit %d\n" % self.exit_code)
        return self.exit_code


def _plain(value):
    if isinstance(value, (list, tuple)):
        return "(" + " ".join(str(v) for v in value) + ")"
    return str(value)


def _load_graph_file(path):
    return parse_graph(_read(path))


def cmd_validate(args):
    rep = Report(["validate", args.graph], [args.graph])
    g = _load_graph_file(args.graph)  # parse errors escape as exit 2
    result = validate_graph(g)
    rep.result["valid"] = result.ok
    if not result.ok:
        rep.result["violations"] = "\n".join(result.violations)
        if result.cycle:
            rep.result["witness"] = list(result.cycle)
        rep.exit_code = 1
    return rep.emit(args.format)


def cmd_simulate(args):
    inputs = [args.graph] + ([args.strategy] if args.strategy else [])
    rep = Report(["simulate", args.graph, "--dest", str(args.dest)], inputs)
    g = _load_graph_file(args.graph)
    attack = None
    if args.strategy:
        attack = strategy_from_json(_read(args.strategy))
    state = simulate(g, args.dest, attack)
    rep.result["rounds"] = state.rounds
    if args.format == "json":
        rep.result["state"] = state.to_json_dict()
    else:
        rep.result["state"] = state.to_text()
    return rep.emit(args.format)


def cmd_find(args):
    rep = Report(
        [
            "find",
            args.graph,
            "--s", str(args.s), "--d", str(args.d), "--m", str(args.m),
            "--capability", args.capability,
        ],
        [args.graph],
    )
    g = _load_graph_file(args.graph)
    if args.capability == "origin":
        if args.oracle:
            res = oracle_origin_spoofing(g, args.s, args.d, args.m)
            if res.successes is not None:
                rep.result["successful_subsets"] = "\n".join(
                    _plain(sub) for sub in res.successes
                ) or "(none)"
        else:
            res = find_origin_spoofing(g, args.s, args.d, args.m, max_len=args.max_len)
    else:
        res = find_sbgp_bruteforce(g, args.s, args.d, args.m, same_path=args.same_path)
    rep.result["found"] = res.found
    rep.result["candidates"] = res.stats.candidates
    rep.result["simulations"] = res.stats.simulations
    if res.found:
        rep.result["strategy"] = json.dumps(strategy_to_json_dict(res.strategy))
        rep.result["witness_path"] = list(res.witness_path)
    else:
        rep.exit_code = 1
    return rep.emit(args.format)


def cmd_gadget(args):
    rep = Report(["gadget", "--mode", args.mode, args.cnf, "-o", args.output], [args.cnf])
    formula = parse_dimacs(_read(args.cnf))
    gen = gen_gadget_origin if args.mode == "origin" else gen_gadget_sbgp
    inst = gen(formula)
    graph_path = args.output + ".graph"
    roles_path = args.output + ".roles"
    with open(graph_path, "w", encoding="utf-8") as fh:
        fh.write(inst.graph_text())
    with open(roles_path, "w", encoding="utf-8") as fh:
        fh.write(inst.roles_text())
    counts = {}
    for tag in inst.structure_tags.values():
        counts[tag] = counts.get(tag, 0) + 1
    rep.result["vertices"] = len(inst.graph)
    rep.result["edges"] = len(inst.graph.edges())
    for tag in sorted(counts):
        rep.result["vertices_%s" % tag] = counts[tag]
    rep.result["wrote"] = "%s %s" % (graph_path, roles_path)
    return rep.emit(args.format)


def cmd_verify(args):
    rep = Report(["verify", "--suite", args.suite], [])
    workers = int(os.environ.get("HIJACKSIM_WORKERS", "1"))
    suite = run_suite(args.suite, seed=args.seed, count=args.count, workers=workers)
    rep.result["report"] = suite.render()
    if not suite.ok:
        rep.exit_code = 1
    return rep.emit(args.format)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hijacksim",
        description="Routing-policy simulation and traffic-attraction analysis",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("validate", help="check a graph file")
    p.add_argument("graph")
    add_format(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="run routing to its fixpoint")
    p.add_argument("graph")
    p.add_argument("--dest", type=int, required=True)
    p.add_argument("--strategy", help="JSON announcement map for a manipulator")
    add_format(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("find", help="search for a hijack strategy")
    p.add_argument("graph")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--capability", choices=("origin", "sbgp"), required=True)
    p.add_argument("--max-len", type=int, default=8, dest="max_len")
    p.add_argument("--oracle", action="store_true", help="exhaustive subset search")
    p.add_argument("--same-path", action="store_true", dest="same_path")
    add_format(p)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("gadget", help="generate a reduction instance from CNF")
    p.add_argument("cnf")
    p.add_argument("--mode", choices=("origin", "sbgp"), required=True)
    p.add_argument("-o", "--output", required=True, help="output path prefix")
    add_format(p)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITE_NAMES, required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--count", type=int, default=None)
    add_format(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HijacksimError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
