"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 validation, 3 I/O, 4 a graph below the
closed-form minimum was found, 5 an ASSERT-class audit failed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from datetime import datetime, timezone

from . import __version__
from ._backend import BACKEND
from .census import census_report, heavy_decompose
from .construct import (build_extremal, default_factors, extremal_report, formula_t,
                        random_regular, validate_params)
from .errors import ValidationError
from .graph import has_c5_through, to_dot
from .graph6 import emit_graph6, read_graph6_file
from .minimizer import SearchConfig, anneal_minimize, derive_seed, exhaustive_minimum
from .prooflab import (audit_c5_structure, audit_lemma_phi, audit_partition_inequality,
                       audit_triangle_identity)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO, EXIT_COUNTEREXAMPLE, EXIT_AUDIT = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit(lines, out_path):
    text = "".join(line + "\n" for line in lines)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> tuple[int, list[str]]:
    params = validate_params(args.n, args.k)
    f1, f2 = default_factors(params, args.factor_mode, args.seed)
    g = build_extremal(params, f1, f2)
    rep = extremal_report(params, g)
    g6 = emit_graph6(g)
    outputs = []
    if args.g6_out:
        with open(args.g6_out, "w", encoding="ascii") as fh:
            fh.write(g6 + "\n")
        outputs.append(args.g6_out)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(g))
        outputs.append(args.dot)
    summary = {
        "n": params.n, "k": params.k, "triangles": rep["triangles"],
        "formula": formula_t(params),
        "apex_edge_triangles": params.apex_edge_triangles,
        "regular": rep["regular"], "apex_bipartite": rep["apex_bipartite"],
        "factors": [f1.to_dict(), f2.to_dict()], "graph6": g6,
    }
    args._outputs = outputs
    return EXIT_OK, [_dump(summary)]


def _load_graphs(path):
    graphs = read_graph6_file(path)
    if not graphs:
        raise ValidationError(f"{path}: no graphs", code="graph6")
    return graphs


def cmd_census(args):
    lines = []
    for g in _load_graphs(args.input):
        rep = census_report(g, args.k)
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(to_dot(g))
        lines.append(_dump(rep))
    return EXIT_OK, lines


def cmd_minimize(args):
    if args.mode == "exhaustive":
        checkpoint = None
        if args.checkpoint_in:
            with open(args.checkpoint_in, encoding="utf-8") as fh:
                checkpoint = json.load(fh)
        rep = exhaustive_minimum(args.n, args.k, args.budget or None, workers=args.workers,
                                 checkpoint=checkpoint, witness_path=args.results)
        cp = rep.details.get("checkpoint")
        if cp and args.checkpoint_out:
            with open(args.checkpoint_out, "w", encoding="utf-8") as fh:
                json.dump(cp, fh, sort_keys=True)
    else:
        cfg = SearchConfig(seed=args.seed, restarts=args.restarts, steps_per_restart=args.steps,
                           seed_mode=args.seed_mode, workers=args.workers)
        rep = anneal_minimize(args.n, args.k, cfg, witness_path=args.results)
    if args.results and not rep.counterexample and rep.best_graph:
        with open(args.results, "a", encoding="ascii") as fh:
            fh.write(rep.best_graph + "\n")
    code = EXIT_COUNTEREXAMPLE if rep.counterexample else EXIT_OK
    return code, [rep.to_json()]


def _audit_graphs(args):
    if args.input:
        return [(i, g) for i, g in enumerate(_load_graphs(args.input))]
    if args.n is None or args.k is None:
        raise UsageError("give --in FILE or --n and --k for random graphs")
    return [(i, random_regular(args.n, args.k, derive_seed(args.seed, i)))
            for i in range(args.count)]


def cmd_audit(args):
    lines = []
    failed = False
    if args.suite == "phi":
        if args.r is None or args.e is None:
            raise UsageError("phi suite needs --r and --e")
        lines.append(audit_lemma_phi(args.r, args.e, args.n_cap).verdict().to_json())
        return EXIT_OK, lines
    if args.k is None:
        raise UsageError(f"{args.suite} suite needs --k")
    for i, g in _audit_graphs(args):
        if args.suite == "identity":
            v = audit_triangle_identity(g, args.k)
        elif args.suite == "partition":
            if args.part:
                part = [int(x) for x in args.part.split(",") if x]
            else:
                rng = random.Random(derive_seed(args.seed, 1_000_000 + i))
                part = [x for x in range(g.n) if rng.random() < 0.5]
            v = audit_partition_inequality(g, args.k, part)
        else:
            d = heavy_decompose(g, args.k)
            found, cyc = has_c5_through(d.g_prime)
            if not found:
                lines.append(_dump({"audit": "c5", "index": i, "holds": None,
                                    "note": "no witness: G' has no 5-cycle"}))
                continue
            v = audit_c5_structure(g, args.k, cyc, d).verdict({"n": g.n, "k": args.k})
        v.params["index"] = i
        if v.kind == "ASSERT" and not v.holds:
            failed = True
        lines.append(v.to_json())
    return (EXIT_AUDIT if failed else EXIT_OK), lines


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="regtri", description="Triangle counts in regular graphs.")
    p.add_argument("--version", action="version", version=f"regtri {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults (flags win)")
    common.add_argument("--manifest", help="write a run manifest JSON here")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a member of G(n,k)")
    c.add_argument("n", type=int)
    c.add_argument("k", type=int)
    c.add_argument("--factor-mode", choices=["circulant", "random"], default="circulant")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", dest="g6_out", help="write graph6 here")
    c.add_argument("--json", dest="out", help="write the JSON summary here instead of stdout")
    c.add_argument("--dot", help="write DOT here")
    c.set_defaults(func=cmd_construct)

    s = sub.add_parser("census", parents=[common], help="triangle census and heavy-edge decomposition")
    s.add_argument("--in", dest="input", required=True, help="graph6 file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--dot", help="write DOT of the (last) graph here")
    s.add_argument("--out", help="write JSON here instead of stdout")
    s.set_defaults(func=cmd_census)

    m = sub.add_parser("minimize", parents=[common], help="search for the minimum triangle count")
    m.add_argument("n", type=int)
    m.add_argument("k", type=int)
    m.add_argument("--mode", choices=["exhaustive", "anneal"], default="anneal")
    m.add_argument("--budget", type=int, default=0, help="exhaustive: node budget (0 = none)")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--restarts", type=int, default=20)
    m.add_argument("--steps", type=int, default=100_000)
    m.add_argument("--seed-mode", choices=["random", "extremal"], default="random")
    m.add_argument("--workers", type=int, default=None)
    m.add_argument("--results", help="append-only graph6 results file")
    m.add_argument("--checkpoint-in")
    m.add_argument("--checkpoint-out")
    m.add_argument("--out", help="write JSON here instead of stdout")
    m.set_defaults(func=cmd_minimize)

    a = sub.add_parser("audit", parents=[common], help="run a proof-lab audit suite")
    a.add_argument("--suite", required=True, choices=["phi", "partition", "identity", "c5"])
    a.add_argument("--r", type=int)
    a.add_argument("--e", type=int)
    a.add_argument("--n-cap", type=int, default=10)
    a.add_argument("--in", dest="input", help="graph6 file")
    a.add_argument("--n", type=int)
    a.add_argument("--k", type=int)
    a.add_argument("--count", type=int, default=50)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--part", help="comma-separated vertices of X (partition suite)")
    a.add_argument("--out", help="write JSON here instead of stdout")
    a.set_defaults(func=cmd_audit)
    return p


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("no command given")
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise ValidationError("config file must hold a JSON object", code="config")
        explicit = vars(args)
        defaults = vars(_defaults_only(parser, args.command))
        for key, value in config.items():
            key = key.replace("-", "_")
            if key not in explicit:
                raise UsageError(f"unknown config key {key!r}")
            if explicit[key] == defaults.get(key):
                setattr(args, key, value)
    return args


def _defaults_only(parser, command):
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    ns = argparse.Namespace()
    for action in parser._actions + sub.choices[command]._actions:
        if action.dest is not argparse.SUPPRESS:
            setattr(ns, action.dest, action.default)
    return ns


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    started = datetime.now(timezone.utc).isoformat()
    try:
        args = parse_args(argv)
        args._outputs = []
        code, lines = args.func(args)
        _emit(lines, args.out)
        if args.manifest:
            manifest = {
                "command": args.command, "argv": argv,
                "params": {k: v for k, v in vars(args).items()
                           if not k.startswith("_") and k != "func"},
                "seed": getattr(args, "seed", None), "version": __version__,
                "backend": BACKEND, "started": started,
                "finished": datetime.now(timezone.utc).isoformat(),
                "outputs": [x for x in [args.out] + args._outputs if x],
            }
            with open(args.manifest, "w", encoding="utf-8") as fh:
                json.dump(manifest, fh, sort_keys=True, indent=2, default=str)
        return code
    except UsageError as exc:
        print(f"regtri: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"regtri: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"regtri: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
