"""Command-line front end.

Exit status: 0 on success, 1 when the answer is negative (invalid algebra,
unrealizable graph, no state, ...), 2 on errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import catalog, quantum
from .errors import AtomGraphError
from .graph import AtomGraph, atom_graph, reconstruct
from .jsonio import dumps, kind_of, load_object, read_json, state_values, write_text
from .pba import DEFAULT_ELEMENT_CAP, PartialBooleanAlgebra, atoms, validate_pba
from .quantum import QuantumSystem, generate_system
from .states import (
    STATE_CAP,
    TOL,
    extend_state,
    has_ks_property,
    random_graph_state,
    restrict_state,
    state_feasible,
    zero_one_states,
)
from .witnesses import THETA_TOL, WeightFunction, nc_inequality_report

SCENARIOS = ("kcbs", "chsh", "fig2", "b1", "b2")


class Negative(Exception):
    """Carries output for a domain-negative answer (exit status 1)."""

    def __init__(self, payload):
        super().__init__("negative result")
        self.payload = payload


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _system_from_projectors(projs, cap: int) -> QuantumSystem:
    Q = generate_system(projs, cap=cap, names=[p.name for p in projs])
    for d in Q.near_coincidences:
        _warn(f"two projectors differ by only {d:.3g}; they were kept distinct")
    return Q


def _load(args):
    """The object in the input file: algebra, graph, or (generated) quantum system."""
    data = read_json(args.input)
    obj = load_object(data)
    if kind_of(data) == "projectors":
        obj = _system_from_projectors(obj, args.cap or DEFAULT_ELEMENT_CAP)
    return obj


def _algebra(obj) -> PartialBooleanAlgebra:
    if isinstance(obj, QuantumSystem):
        return obj.algebra
    if isinstance(obj, PartialBooleanAlgebra):
        return obj
    raise AtomGraphError("this command needs an algebra or projector set")


def _graph(obj) -> AtomGraph:
    if isinstance(obj, AtomGraph):
        return obj
    return atom_graph(_algebra(obj))


def _table(payload) -> str:
    """Flat ``key  value`` rendering of a result."""
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        elif isinstance(v, list) and v and all(isinstance(x, (list, dict)) for x in v):
            for k, x in enumerate(v):
                walk(f"{prefix}[{k}]", x)
        else:
            if isinstance(v, list):
                v = " ".join(str(x) for x in v)
            elif isinstance(v, float):
                v = f"{v:.10g}"
            lines.append(f"{prefix:<24} {v}")

    walk("", payload)
    return "\n".join(lines) + "\n"


# --- verbs -----------------------------------------------------------------


def cmd_validate(args):
    data = read_json(args.input)
    if kind_of(data) == "projectors":
        B = _system_from_projectors(load_object(data), args.cap or DEFAULT_ELEMENT_CAP).algebra
        report = validate_pba(B, cap=args.cap or DEFAULT_ELEMENT_CAP)
    else:
        report = validate_pba(data, cap=args.cap or DEFAULT_ELEMENT_CAP)
    if not report.ok:
        raise Negative(report.to_dict())
    return report.to_dict()


def cmd_atoms(args):
    B = _algebra(_load(args))
    names = [B.labels[a] for a in atoms(B)]
    return {"atoms": names, "count": len(names)}


def cmd_atom_graph(args):
    G = _graph(_load(args))
    if args.format == "dot":
        return G.to_dot()
    return G.to_dict()


def cmd_reconstruct(args):
    G = _graph(_load(args))
    res = reconstruct(G)
    if not res.realizable:
        raise Negative({"realizable": False, "reason": res.reason, "witnesses": list(res.witnesses)})
    return res.algebra.to_dict()


def cmd_states(args):
    G = _graph(_load(args))
    tol = args.tolerance or TOL
    supports = zero_one_states(G, cap=args.cap or STATE_CAP)
    feasible = state_feasible(G, tol=tol)
    out = {
        "zero_one_states": [[G.vertices[i] for i in np.flatnonzero(s.values)] for s in supports],
        "count": len(supports),
        "ks_property": not supports,
        "feasible_state": None if feasible is None else {"values": feasible.as_dict()},
    }
    if args.seed is not None and feasible is not None:
        q = random_graph_state(G, np.random.default_rng(args.seed))
        out["random_state"] = None if q is None else {"values": q.as_dict()}
    if feasible is None:
        raise Negative(out)
    return out


def cmd_ks_check(args):
    ks = has_ks_property(_graph(_load(args)))
    out = {"ks_property": ks}
    if not ks:
        raise Negative(out)
    return out


def cmd_witness(args):
    G = _graph(_load(args))
    if args.weights in (None, "ones"):
        w = WeightFunction.ones(G)
    else:
        w = WeightFunction.from_dict(read_json(args.weights))
    report = nc_inequality_report(G, w, tol=args.tolerance or THETA_TOL)
    return report.to_dict()


def cmd_scenario(args):
    name = args.name
    if name == "b1":
        return catalog.b1().to_dict()
    if name == "b2":
        return catalog.b2().to_dict()
    build = {"kcbs": quantum.scenario_kcbs, "chsh": quantum.scenario_chsh, "fig2": quantum.scenario_fig2}[name]
    return build().to_dict()


def cmd_state_transfer(args):
    B = _algebra(_load(args))
    values = state_values(read_json(args.state))
    to = args.to
    if to is None:
        to = "graph" if set(values) == set(B.labels) else "algebra"
    tol = args.tolerance or TOL
    if to == "graph":
        q = restrict_state(B, values, tol=tol)
        return {"values": q.as_dict()}
    p = extend_state(B, values, tol=tol)
    return {"values": p.as_dict()}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", "--graph", "--algebra", dest="input", default="-",
                        help="input JSON file, '-' for stdin")
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "dot", "table"), default="json")
    common.add_argument("--cap", type=int, default=None, help="size cap for the operation")
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="atomgraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)
    sub.add_parser("validate", parents=[common], help="check the partial Boolean algebra axioms")
    sub.add_parser("atoms", parents=[common], help="list atoms")
    sub.add_parser("atom-graph", parents=[common], help="atom graph as JSON or DOT")
    sub.add_parser("reconstruct", parents=[common], help="rebuild an algebra from a graph")
    sub.add_parser("states", parents=[common], help="0-1 states and a feasible graph state")
    sub.add_parser("ks-check", parents=[common], help="exit 0 iff the graph has no 0-1 state")
    w = sub.add_parser("witness", parents=[common], help="alpha, theta and alpha* report")
    w.add_argument("--weights", default="ones", help="'ones' or a weights JSON file")
    s = sub.add_parser("scenario", parents=[common], help="emit a built-in scenario")
    s.add_argument("name", choices=SCENARIOS)
    t = sub.add_parser("state-transfer", parents=[common], help="restrict or extend a state")
    t.add_argument("--state", required=True, help="state JSON file")
    t.add_argument("--to", choices=("graph", "algebra"), default=None)
    return p


VERBS = {
    "validate": cmd_validate,
    "atoms": cmd_atoms,
    "atom-graph": cmd_atom_graph,
    "reconstruct": cmd_reconstruct,
    "states": cmd_states,
    "ks-check": cmd_ks_check,
    "witness": cmd_witness,
    "scenario": cmd_scenario,
    "state-transfer": cmd_state_transfer,
}


def _render(payload, fmt: str) -> str:
    if isinstance(payload, str):
        return payload
    if fmt == "table":
        return _table(payload)
    return dumps(payload)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "dot" and args.verb != "atom-graph":
        parser.error("--format dot is only available for atom-graph")
    try:
        payload = VERBS[args.verb](args)
        status = 0
    except Negative as neg:
        payload, status = neg.payload, 1
    except (AtomGraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    write_text(_render(payload, args.format), args.output)
    return status


if __name__ == "__main__":
    sys.exit(main())
