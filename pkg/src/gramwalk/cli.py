"""Command-line interface.

Subcommands: run (walker simulation), oracle (exact chain result),
compare (distance between two result files), validate (grammar
diagnostics), gen-example (write a built-in fixture).

Exit codes: 0 success, 1 diagnostic errors, 2 I/O or parse errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, Optional

from .fixtures import EXAMPLES
from .grammar import Grammar, GrammarError, parse_grammar, validate_grammar, DEFAULT_RWR_BASE
from .model import Node
from .ntriples import ParseError, parse_triples
from .oracle import (
    ChainCapacityError,
    UnsupportedGrammarError,
    blend_teleport,
    compare_rankings,
    counted_distribution,
    expand_chain,
    implied_network,
    power_iteration,
    transition_matrix,
)
from .store import SemanticNetwork
from .walker import RunConfig, node_key, round_sig, run

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_IO = 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_IO):
        super().__init__(message)
        self.code = code


def _load_network(path: str) -> SemanticNetwork:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}")
    try:
        return parse_triples(text)
    except ParseError as e:
        raise CliError(f"{path}: {e}")


def _load_grammar(path: str, base: str) -> Grammar:
    net = _load_network(path)
    try:
        return parse_grammar(net, base=base)
    except GrammarError as e:
        raise CliError(f"{path}: {e}")


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GRAMWALK_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"GRAMWALK_SEED must be an integer, got {env!r}")
    return 0


def _ranked_csv(normalized: Dict[Node, float], counts: Dict[Node, int]) -> str:
    rows = ["vertex,count,normalized"]
    ordered = sorted(normalized.items(), key=lambda kv: (-kv[1], node_key(kv[0])))
    for v, x in ordered:
        rows.append(f"{node_key(v)},{counts.get(v, '')},{round_sig(x):.12g}")
    return "\n".join(rows) + "\n"


def _cmd_run(args) -> int:
    net = _load_network(args.graph)
    g = _load_grammar(args.grammar, args.namespace)
    cfg = RunConfig(
        epsilon=args.epsilon,
        rng_seed=_seed(args),
        max_steps=args.max_steps,
        check_every=args.check_every,
        walkers=args.walkers,
    )
    try:
        result = run(net, g, cfg)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    _write(args.out, result.to_json())
    if args.csv:
        _write(args.csv, _ranked_csv(result.normalized, result.counts))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    net = _load_network(args.graph)
    g = _load_grammar(args.grammar, args.namespace)
    try:
        chain = expand_chain(net, g, max_states=args.max_states)
        if args.delta is not None:
            implied = implied_network(chain)
            blended = blend_teleport(transition_matrix(implied), args.delta)
            dist = power_iteration(blended, tol=1e-12, max_iters=200_000).distribution
        else:
            dist = counted_distribution(chain)
    except (ChainCapacityError, UnsupportedGrammarError) as e:
        print(str(e), file=sys.stderr)
        return EXIT_DIAGNOSTICS
    doc = {
        "normalized": {node_key(v): round_sig(x) for v, x in dist.items()},
        "strongly_connected": chain.strongly_connected,
        "aperiodic": chain.aperiodic,
        "states": len(chain.states),
    }
    _write(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _read_normalized(path: str) -> Dict[str, float]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}")
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: {e}")
    if "normalized" not in doc:
        raise CliError(f"{path}: result file has no 'normalized' field")
    return doc["normalized"]


def _cmd_compare(args) -> int:
    a = _read_normalized(args.result_a)
    b = _read_normalized(args.result_b)
    metrics = compare_rankings(a, b, tie_tol=args.tie_tol)
    doc = {
        "l1": round_sig(metrics["l1"]),
        "l2": round_sig(metrics["l2"]),
        "rank_agreement": metrics["rank_agreement"],
    }
    _write(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def _cmd_validate(args) -> int:
    net = _load_network(args.graph) if args.graph else None
    g = _load_grammar(args.grammar, args.namespace)
    diags = validate_grammar(g, net)
    for d in diags:
        print(str(d))
    errors = [d for d in diags if d.severity == "error"]
    return EXIT_DIAGNOSTICS if errors else EXIT_OK


def _cmd_gen_example(args) -> int:
    if args.name not in EXAMPLES:
        raise CliError(
            f"unknown example {args.name!r}; available: {', '.join(sorted(EXAMPLES))}"
        )
    _write(args.out, EXAMPLES[args.name]())
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gramwalk",
        description="Grammar-constrained random-walk centrality on semantic networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True, help="network triple file")
        p.add_argument("--grammar", required=True, help="grammar triple file")
        p.add_argument(
            "--namespace",
            default=DEFAULT_RWR_BASE,
            help=f"rwr vocabulary base IRI (default {DEFAULT_RWR_BASE})",
        )
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p_run = sub.add_parser("run", help="simulate walkers until convergence")
    common(p_run)
    p_run.add_argument("--seed", type=int, default=None,
                       help="RNG seed (default: $GRAMWALK_SEED or 0)")
    p_run.add_argument("--epsilon", type=float, default=0.001)
    p_run.add_argument("--max-steps", type=int, default=5_000_000, dest="max_steps")
    p_run.add_argument("--check-every", type=int, default=100, dest="check_every")
    p_run.add_argument("--walkers", type=int, default=1)
    p_run.add_argument("--csv", default=None, help="also write a rank-ordered CSV here")
    p_run.set_defaults(func=_cmd_run)

    p_oracle = sub.add_parser("oracle", help="exact stationary distribution")
    common(p_oracle)
    p_oracle.add_argument("--max-states", type=int, default=100_000, dest="max_states")
    p_oracle.add_argument(
        "--delta", type=float, default=None,
        help="blend the implied network with uniform teleportation at this "
        "weight instead of using the grammar's own Reresolve rules",
    )
    p_oracle.set_defaults(func=_cmd_oracle)

    p_cmp = sub.add_parser("compare", help="distances between two result files")
    p_cmp.add_argument("result_a")
    p_cmp.add_argument("result_b")
    p_cmp.add_argument("--tie-tol", type=float, default=0.0, dest="tie_tol",
                       help="treat scores this close as tied when ranking")
    p_cmp.add_argument("--out", default=None)
    p_cmp.set_defaults(func=_cmd_compare)

    p_val = sub.add_parser("validate", help="static grammar diagnostics")
    p_val.add_argument("--graph", default=None, help="optional network to check against")
    p_val.add_argument("--grammar", required=True)
    p_val.add_argument("--namespace", default=DEFAULT_RWR_BASE)
    p_val.set_defaults(func=_cmd_validate)

    p_gen = sub.add_parser("gen-example", help="write a built-in fixture file")
    p_gen.add_argument("name", help=f"one of: {', '.join(sorted(EXAMPLES))}")
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=_cmd_gen_example)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(str(e), file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
