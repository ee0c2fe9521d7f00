"""Command-line interface: ``gen``, ``align``, ``score`` and ``sweep``."""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys

from .clusters import load_partition
from .dispatch import METHODS, prepare_problem, run_method
from .exceptions import AlignmentError, InfeasibleError, NotATreeError, ParseError
from .graph import (DUMMY_PREFIX, ConservationMode, load_edge_list, load_vertex_universe,
                    pad_to_size)
from .io import complete_matching, read_alignment_pairs, write_alignment
from .matching import ScoreMatrix, load_similarity
from .objective import TradeoffConfig, balanced_objective, conserved_count, similarity_sum
from .sweep import DEFAULT_GRID, parse_grid, sweep
from .synth import ClusterPlan, SyntheticSpec, synth_generate, write_instance

log = logging.getLogger("gnalign")

MODES = [m.value for m in ConservationMode]


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for infeasible problems
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as f:
            yield f


def _load_graph(path, universe=None):
    vertices = None
    if universe:
        with open(universe) as f:
            vertices = load_vertex_universe(f)
    with open(path) as f:
        graph, report = load_edge_list(f, vertices, source=path)
    if report.duplicates or report.self_loops:
        log.warning("%s: dropped %d duplicate edges and %d self-loops",
                    path, report.duplicates, report.self_loops)
    return graph


def _load_inputs(args):
    g = _load_graph(args.g_edges, args.g_vertices)
    h = _load_graph(args.h_edges, args.h_vertices)
    if args.sim:
        with open(args.sim) as f:
            scores = load_similarity(f, g, h, constrained=args.constrained, source=args.sim)
    else:
        scores = ScoreMatrix.zeros(h.num_vertices, g.num_vertices)
    partition = None
    if getattr(args, "clusters", None):
        with open(args.clusters) as f:
            partition = load_partition(f, source=args.clusters)
    return g, h, scores, partition


def _add_inputs(p, clusters=True):
    p.add_argument("--g-edges", required=True, help="edge list of graph G")
    p.add_argument("--h-edges", required=True, help="edge list of graph H")
    p.add_argument("--g-vertices", help="vertex universe of G (one label per line)")
    p.add_argument("--h-vertices", help="vertex universe of H")
    p.add_argument("--sim", help="similarity triplets h<TAB>g<TAB>score")
    p.add_argument("--constrained", action="store_true",
                   help="pairs absent from --sim are forbidden")
    p.add_argument("--mode", choices=MODES, default="strict")
    if clusters:
        p.add_argument("--clusters", help="cluster file cluster_id<TAB>G|H<TAB>label")
        p.add_argument("--max-side", type=int, default=8,
                       help="largest cluster side enumerated by mp")


def _add_solver_options(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--restarts", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.51)
    p.add_argument("--beta", type=float, default=-6.87)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--max-n", type=int, default=9)


def _options(args, method):
    if method == "ga":
        return {"max_iters": args.max_iters, "n_restarts": args.restarts}
    if method == "isorank":
        return {"max_iters": args.max_iters, "tol": args.tol}
    if method == "mrf":
        return {"alpha": args.alpha, "beta": args.beta, "burn_in": args.burn_in,
                "samples": args.samples}
    if method == "oracle":
        return {"max_n": args.max_n}
    return {}


def cmd_gen(args):
    plan = None
    if args.clusters:
        plan = ClusterPlan(args.clusters, args.ambiguous_fraction, args.max_side, args.tree)
    spec = SyntheticSpec(args.n, args.edge_prob, args.noise, args.seed, plan,
                         args.similarity_signal)
    paths = write_instance(synth_generate(spec), args.out)
    for key in sorted(paths):
        print(f"{key}\t{paths[key]}")
    return 0


def cmd_align(args):
    g, h, scores, partition = _load_inputs(args)
    if args.method in ("mp", "mrf") and partition is None:
        raise ParseError(f"--method {args.method} requires --clusters")
    problem = prepare_problem(g, h, scores, partition, args.mode, max_side=args.max_side)
    try:
        matching = run_method(args.method, problem, lam=args.lam, seed=args.seed,
                              **_options(args, args.method))
    except NotATreeError:
        if args.fallback != "ga":
            raise
        log.warning("cluster graph has a cycle; falling back to ga")
        matching = run_method("ga", problem, lam=args.lam, seed=args.seed,
                              **_options(args, "ga"))
    cfg = TradeoffConfig(args.lam, problem.mode)
    header = {
        "method": matching.provenance.get("solver", args.method),
        "mode": problem.mode.value,
        "lambda": repr(args.lam),
        "J": conserved_count(matching, problem.g, problem.h, problem.mode),
        "S": repr(similarity_sum(matching, problem.scores, problem.g, problem.h)),
        "objective": repr(balanced_objective(matching, problem.g, problem.h, problem.scores, cfg)),
    }
    with _output(args.out) as f:
        write_alignment(matching, problem.g, problem.h, problem.scores, f,
                        include_dummy=args.include_dummy, header=header)
    return 0


def cmd_score(args):
    g, h, scores, _ = _load_inputs(args)
    with open(args.alignment) as f:
        pairs = read_alignment_pairs(f, source=args.alignment)
    pairs = [(a, b) for a, b in pairs
             if not (a.startswith(DUMMY_PREFIX) or b.startswith(DUMMY_PREFIX))]
    # enough padding that every unlisted vertex can sit on a dummy
    n = g.num_vertices + h.num_vertices - len(pairs)
    gp, hp = pad_to_size(g, n), pad_to_size(h, n)
    matching = complete_matching(pairs, gp, hp)
    sp = scores.padded(n)
    mode = ConservationMode.coerce(args.mode)
    j = conserved_count(matching, gp, hp, mode)
    s = similarity_sum(matching, sp, gp, hp)
    obj = balanced_objective(matching, gp, hp, sp, TradeoffConfig(args.lam, mode))
    with _output(args.out) as f:
        f.write("J\tS\tobjective\n")
        f.write(f"{j}\t{s!r}\t{obj!r}\n")
    return 0 if obj != float("-inf") else InfeasibleError.exit_code


def cmd_sweep(args):
    g, h, scores, partition = _load_inputs(args)
    problem = prepare_problem(g, h, scores, partition, args.mode, max_side=args.max_side)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise ParseError(f"unknown method {m!r}")
    grid = parse_grid(args.grid) if args.grid is not None else list(DEFAULT_GRID)
    result = sweep(problem, methods, grid, seed=args.seed, n_jobs=args.jobs,
                   options={m: _options(args, m) for m in methods})
    with _output(args.out) as f:
        result.to_csv(f, timing=args.timing)
    return 0


def build_parser():
    parser = _Parser(prog="gnalign", description="Global network alignment toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a synthetic instance with a planted matching")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--edge-prob", type=float, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--similarity-signal", type=float, default=0.5)
    p.add_argument("--clusters", type=int, default=0, help="number of clusters to plan")
    p.add_argument("--ambiguous-fraction", type=float, default=0.5)
    p.add_argument("--max-side", type=int, default=3)
    p.add_argument("--tree", action="store_true",
                   help="draw edges only inside clusters and along a cluster tree")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("align", help="align two graphs")
    _add_inputs(p)
    p.add_argument("--method", choices=METHODS, default="ga")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--fallback", choices=["none", "ga"], default="none",
                   help="solver used when mp finds a loopy cluster graph")
    p.add_argument("--include-dummy", action="store_true")
    p.add_argument("--out", help="alignment TSV (default stdout)")
    _add_solver_options(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("score", help="score an alignment")
    _add_inputs(p, clusters=False)
    p.add_argument("--alignment", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("sweep", help="run methods over a lambda grid")
    _add_inputs(p)
    p.add_argument("--methods", default="ga,isorank")
    p.add_argument("--grid", help="comma list or start:stop:step (default 0:1:0.05)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add a runtime column")
    p.add_argument("--out", help="CSV path (default stdout)")
    _add_solver_options(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except AlignmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
