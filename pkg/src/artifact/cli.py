"""Command-line entry point: ``artifact <command> [options]``.

Every command reads JSON inputs, writes one JSON document (to stdout or
``--out``) and records the seed it ran with. Numbers in the output are exact
rational strings or plain integers. Exit codes:

    0  success
    2  input error (malformed JSON, failed guard, unknown name)
    3  a size cap was exceeded
    4  a checked property failed
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import fixtures, verify
from .bricks import BrickOverflow, enumerate_bricks, find_brick
from .circuits import DEFAULT_CAP, CircuitOverflow
from .cones import circuit_keys, cone_hrep, facets, ghost_graph, integer_graph_genus, squash
from .fans import FanError, canonical_fan, enumerate_psl, fan_for_brick, pairs_at
from .genus0 import QUARTIC_MONOMIALS, parse_quartic, realize_pair, rho_from_quartic, rho_on_graph
from .graph import Multigraph, OrderedPartition, SlopeLevelPair, edge_lengths, slope_sets, validate, zeta
from .qlinalg import GeneralPositionError
from .rational import fmt, q
from .residue import eta, eta_hat, gamma, residue_space
from .setfn import SetFunction, adjoint, polytope_hrep, properties, upmin

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_PROPERTY = 0, 2, 3, 4


class PropertyFailure(RuntimeError):
    """A command finished but something it checks came out false."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload


# input helpers ------------------------------------------------------------------------------

def read_json(path: str) -> object:
    """Read a JSON file; a bare fixture name like ``k4`` or ``k4.json`` falls back to the shipped corpus."""
    p = Path(path)
    if p.exists():
        with p.open() as fh:
            return json.load(fh)
    stem = p.name.removesuffix(".json")
    if p.parent == Path(".") and stem in fixtures.names():
        return fixtures.load_json(stem)
    raise FileNotFoundError(f"no such file: {path}")


def load_graph(path: str) -> Multigraph:
    return Multigraph.from_json(read_json(path))


def load_pair(G: Multigraph, path: str) -> SlopeLevelPair:
    obj = read_json(path)
    if not isinstance(obj, dict) or "slopes" not in obj or "partition" not in obj:
        raise ValueError("pair JSON needs 'slopes' and 'partition'")
    return SlopeLevelPair.from_json(G, obj)


def load_partition(G: Multigraph, path: str | None) -> OrderedPartition:
    if path is None:
        return OrderedPartition.trivial(G)
    obj = read_json(path)
    if isinstance(obj, dict):
        obj = obj["partition"]
    return OrderedPartition.from_json(obj, G)


def load_rho(G: Multigraph, path: str | None) -> tuple[dict[str, Fraction] | None, dict | None]:
    """Edge-keyed rho, or a quartic {"a_ijr": "p/q"} turned into rho on the complete graph on four vertices."""
    if path is None:
        return None, None
    obj = read_json(path)
    if not isinstance(obj, dict):
        raise ValueError("rho JSON must be an object")
    if obj and all(k.startswith("a_") for k in obj):
        coeffs = parse_quartic(obj)
        rho = rho_from_quartic(coeffs)
        echo = {
            "quartic": {"a_" + "".join(map(str, m)): fmt(coeffs[m]) for m in QUARTIC_MONOMIALS if coeffs[m]},
            "rho": {f"{i}{j}": fmt(x) for (i, j), x in rho.items()},
        }
        return rho_on_graph(G, rho), echo
    missing = [e for e in G.edge_ids if e not in obj]
    if missing:
        raise ValueError(f"rho has no value for edge {missing[0]}")
    return {e: q(obj[e]) for e in G.edge_ids}, None


def pair_summary(pair: SlopeLevelPair) -> dict:
    ss = slope_sets(pair.s)
    return {
        **pair.to_json(),
        "upward": sorted(a.key for a in ss.upward),
        "integer_edges": sorted(ss.integer_edges),
    }


# commands -----------------------------------------------------------------------------------

def cmd_validate(args) -> dict:
    G = load_graph(args.graph)
    v = validate(G)
    return {
        "connected": v.connected,
        "vertices": G.n,
        "edges": len(G.edge_ids),
        "loops": sum(1 for e in G.edge_ids if G.is_loop(e)),
        "genus": v.genus,
        "total_genus": v.total_genus,
    }


def cmd_setfn(args) -> dict:
    f = SetFunction.from_json(read_json(args.setfn))
    out = {"properties": properties(f).as_dict(), "upmin": upmin(f).to_json()["values"]}
    if args.adjoint:
        out["adjoint"] = adjoint(f).to_json()["values"]
    if args.polytope:
        out["polytope"] = polytope_hrep(f).to_json()
    return out


def cmd_residue(args) -> dict:
    G = load_graph(args.graph)
    return residue_space(G, load_partition(G, args.partition)).to_json()


def cmd_gamma(args) -> dict:
    G = load_graph(args.graph)
    pi = load_partition(G, args.partition)
    return {"partition": pi.to_json(G), "gamma": gamma(G, pi).to_json()["values"]}


def cmd_eta(args) -> dict:
    G = load_graph(args.graph)
    pair = load_pair(G, args.pair)
    et = eta(G, pair.pi, pair.s)
    out = {
        "pair": pair_summary(pair),
        "gamma": gamma(G, pair.pi).to_json()["values"],
        "zeta": zeta(pair.s).to_json()["values"],
        "eta": et.to_json()["values"],
        "upmin": upmin(et).to_json()["values"],
        "properties": properties(et).as_dict(),
    }
    if args.hat:
        out["eta_hat"] = eta_hat(G, pair.pi, pair.s).to_json()["values"]
    return out


def cmd_cone(args) -> dict:
    G = load_graph(args.graph)
    pair = load_pair(G, args.pair)
    cone = cone_hrep(G, pair.s, pair.pi, cap=args.cap)
    return {
        "pair": pair_summary(pair),
        "cone": cone.to_json(),
        "dim": len(G.edge_ids) - integer_graph_genus(G, pair.s, pair.pi),
        "integer_genus": integer_graph_genus(G, pair.s, pair.pi),
    }


def _parse_circuit(G: Multigraph, text: str) -> list[str]:
    keys = [k.strip() for k in text.split(",") if k.strip()]
    for k in keys:
        if ":" not in k:
            raise ValueError(f"circuit entries look like 'e01:+', got {k!r}")
    return keys


def cmd_squash(args) -> dict:
    G = load_graph(args.graph)
    pair = load_pair(G, args.pair)
    if args.circuit:
        want = _parse_circuit(G, args.circuit)
        gg = ghost_graph(G, pair.s, pair.pi)
        for z in gg.circuits(args.cap):
            keys = circuit_keys(z)
            if gg.is_essential(z) and sorted(keys) == sorted(want):
                new = squash(G, pair.s, pair.pi, z)
                return {"pair": pair_summary(pair), "circuit": keys, "squashed": pair_summary(new)}
        raise ValueError("no essential circuit with those arrows")
    return {
        "pair": pair_summary(pair),
        "facets": [
            {
                "circuit": circuit_keys(f.circuit),
                "alternatives": [circuit_keys(z) for z in f.alternatives],
                "squashed": pair_summary(f.pair),
                "integer_genus": [f.genus_before, f.genus_after],
            }
            for f in facets(G, pair.s, pair.pi)
        ],
    }


def cmd_psl(args) -> dict:
    G = load_graph(args.graph)
    psl = enumerate_psl(G, args.slope_bound)
    return {"count": len(psl), "pairs": [p.to_json() for p in psl]}


def cmd_bricks(args) -> dict:
    G = load_graph(args.graph)
    g = args.g if args.g is not None else G.total_genus
    bricks = enumerate_bricks(G.vertices, g, cap=args.cap)
    return {"g": g, "ground": list(G.vertices.elements), "count": len(bricks), "bricks": [B.to_json() for B in bricks]}


def cmd_fan(args) -> dict:
    G = load_graph(args.graph)
    psl = enumerate_psl(G, args.slope_bound)
    bricks = enumerate_bricks(G.vertices, G.total_genus)
    if args.brick is None:
        fan = canonical_fan(G, psl, bricks)
    else:
        fan = fan_for_brick(G, find_brick(bricks, args.brick), psl)
    out = fan.to_json()
    out["maximal"] = fan.maximal()
    return out


def cmd_canonical_fan(args) -> dict:
    G = load_graph(args.graph)
    psl = enumerate_psl(G, args.slope_bound)
    fan = canonical_fan(G, psl)
    out = fan.to_json()
    out["maximal"] = fan.maximal()
    return out


def cmd_pairs_at(args) -> dict:
    G = load_graph(args.graph)
    obj = read_json(args.lengths)
    ell = edge_lengths(G, obj)
    if any(x <= 0 for x in ell.values()):
        raise ValueError("edge lengths must be positive")
    psl = enumerate_psl(G, args.slope_bound)
    hits = pairs_at(G, ell, psl)
    return {"lengths": {e: fmt(x) for e, x in ell.items()}, "pairs": [p.to_json() for p in hits]}


def cmd_realize(args) -> dict:
    G = load_graph(args.graph)
    pair = load_pair(G, args.pair)
    rho, echo = load_rho(G, args.rho)
    rep = realize_pair(G, pair.s, pair.pi, rho, seed=args.seed, attempts=args.attempts)
    out = rep.to_json(basis=args.basis)
    out["pair"] = pair.to_json()
    if rho is not None:
        out["rho"] = {e: fmt(x) for e, x in rho.items()}
    if echo is not None:
        out["quartic"] = echo
    if not rep.ok:
        raise PropertyFailure(rep.problems[0], out)
    return out


def cmd_verify(args) -> dict:
    names = list(verify.SUITES) if args.suite == "all" else args.suite.split(",")
    unknown = [n for n in names if n not in verify.SUITES]
    if unknown:
        raise ValueError(f"unknown suite {unknown[0]!r}; choose from {', '.join(verify.SUITES)}")

    def progress(r):
        if not args.quiet:
            print(r.line(), file=sys.stderr, flush=True)

    results = verify.run(names, args.seed, progress)
    out = verify.report(results, args.seed)
    if not out["passed"]:
        raise PropertyFailure("some suites failed", out)
    return out


# parser -------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description="Exact computations with slope-level pairs on metric graphs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw (recorded in the output)")
    common.add_argument("--out", help="write JSON here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help, description=help)
        sp.set_defaults(func=fn)
        return sp

    def graph_arg(sp):
        sp.add_argument("--graph", required=True, help="graph JSON, or a shipped fixture name")

    sp = add("validate", cmd_validate, "check that a graph is connected and report its genus")
    sp.add_argument("graph_pos", nargs="?", metavar="GRAPH")
    sp.add_argument("--graph", dest="graph_opt")

    sp = add("setfn", cmd_setfn, "properties and UpMin transform of a set function")
    sp.add_argument("--setfn", required=True)
    sp.add_argument("--adjoint", action="store_true")
    sp.add_argument("--polytope", action="store_true", help="also emit the base polytope H-representation")

    for name, fn, help in (("residue", cmd_residue, "residue space of a level graph"),
                           ("gamma", cmd_gamma, "residue-space rank function of a level graph")):
        sp = add(name, fn, help)
        graph_arg(sp)
        sp.add_argument("--partition", help="ordered partition JSON (default: one level)")

    sp = add("eta", cmd_eta, "gamma, zeta and eta of a slope-level pair")
    graph_arg(sp)
    sp.add_argument("--pair", required=True)
    sp.add_argument("--hat", action="store_true", help="also emit eta-hat")

    sp = add("cone", cmd_cone, "H-representation of the cone of a slope-level pair")
    graph_arg(sp)
    sp.add_argument("--pair", required=True)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum number of circuits")

    sp = add("squash", cmd_squash, "facets of a cone and the pairs they squash to")
    graph_arg(sp)
    sp.add_argument("--pair", required=True)
    sp.add_argument("--circuit", help="squash along this circuit only, e.g. 'e02:-,e01:+'")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)

    for name, fn, help in (("psl", cmd_psl, "all permissible slope-level pairs"),
                           ("canonical-fan", cmd_canonical_fan, "cells of the canonical fan")):
        sp = add(name, fn, help)
        graph_arg(sp)
        sp.add_argument("--slope-bound", type=int, help="override the slope bound used while enumerating")

    sp = add("bricks", cmd_bricks, "full-dimensional bricks of the simplex")
    graph_arg(sp)
    sp.add_argument("--g", type=int, help="simplex size (default: genus of the graph)")
    sp.add_argument("--cap", type=int, default=100_000, help="maximum number of bricks")

    sp = add("fan", cmd_fan, "fan of one brick, or the canonical fan without --brick")
    graph_arg(sp)
    sp.add_argument("--brick", help="brick floor key or B<i> for the extremal brick at vertex i")
    sp.add_argument("--slope-bound", type=int)

    sp = add("pairs-at", cmd_pairs_at, "permissible pairs whose open cone contains given edge lengths")
    graph_arg(sp)
    sp.add_argument("--lengths", required=True, help="JSON object edge -> length, or a list in edge order")
    sp.add_argument("--slope-bound", type=int)

    sp = add("realize", cmd_realize, "differential spaces of a pair on random rational components")
    graph_arg(sp)
    sp.add_argument("--pair", required=True)
    sp.add_argument("--rho", help="edge -> gluing scalar, or a quartic {'a_ijr': 'p/q'} on four vertices")
    sp.add_argument("--attempts", type=int, default=5, help="fresh configurations to try")
    sp.add_argument("--basis", action="store_true", help="include a basis of the glued space")

    sp = add("verify", cmd_verify, "run the property suites")
    sp.add_argument("--suite", default="all", help="'all' or a comma-separated list of suite names")
    sp.add_argument("--quiet", action="store_true", help="no progress lines on stderr")
    return p


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _error(code: int, kind: str, message: str, args) -> int:
    _emit({"error": kind, "message": message, "seed": getattr(args, "seed", 0)}, getattr(args, "out", None))
    print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        args.graph = args.graph_opt or args.graph_pos
        if args.graph is None:
            parser.error("validate needs a graph")
    try:
        result = args.func(args)
    except PropertyFailure as exc:
        payload = exc.payload or {}
        _emit({"command": args.command, "seed": args.seed, "error": "property failure",
               "message": str(exc), **payload}, args.out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except (BrickOverflow, CircuitOverflow) as exc:
        return _error(EXIT_CAP, "cap overflow", str(exc), args)
    except (FanError, GeneralPositionError) as exc:
        return _error(EXIT_PROPERTY, "property failure", str(exc), args)
    except FileNotFoundError as exc:
        return _error(EXIT_INPUT, "input error", str(exc), args)
    except json.JSONDecodeError as exc:
        return _error(EXIT_INPUT, "malformed JSON", str(exc), args)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return _error(EXIT_INPUT, "input error", f"missing key {msg!r}" if isinstance(exc, KeyError) else msg, args)
    _emit({"command": args.command, "seed": args.seed, **result}, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
