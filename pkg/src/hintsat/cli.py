"""Command line interface.

Subcommands: prove (single problem; exit 0 = proof, 1 = no proof, 2 = error),
corpus (batch evaluation), select (watchlist construction), cover (greedy
strategy cover of a results file).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .harness import (greedy_cover, load_problem, load_strategy_file, read_results,
                      report, run_corpus, run_one, solved_sets, watchlists_for)
from .proofs import extract_watchlist
from .saturation import PROOF
from .selection import build_watchlists, extract_features, load_corpus
from .strategy import apply_mode, get_strategy
from .tptp import print_clause


def _add_budget_args(p):
    p.add_argument("--max-given", type=int, default=10000,
                   help="given-clause budget (default 10000)")
    p.add_argument("--max-seconds", type=float, default=None,
                   help="optional wall-clock cap per run")


def make_parser():
    parser = argparse.ArgumentParser(prog="hintsat")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="prove a single problem")
    p.add_argument("problem")
    p.add_argument("--strategy", default="baseline",
                   help="builtin name or -H(...) specification")
    p.add_argument("--mode", default=None,
                   choices=["pref", "const", "uwl", "ska", "dyn", "dyndec",
                            "evo"],
                   help="apply a guidance mode to the strategy")
    p.add_argument("--watchlist-dir", default=None)
    p.add_argument("--watchlist", action="append", default=[],
                   help="explicit watchlist file (repeatable)")
    p.add_argument("--proof-out", default=None,
                   help="write the proof clauses as TPTP CNF")
    p.add_argument("--stats-out", default=None,
                   help="write the run statistics as JSON")
    p.add_argument("--quiet", action="store_true")
    _add_budget_args(p)

    p = sub.add_parser("corpus", help="run strategies over a problem directory")
    p.add_argument("problems")
    p.add_argument("--strategies", required=True,
                   help="file with one strategy per line (name = spec)")
    p.add_argument("--watchlist-dir", default=None,
                   help="flat dir of .p files, or per-problem subdirectories")
    p.add_argument("--out", default=None, help="results file (JSON lines)")
    p.add_argument("--save-proofs", default=None,
                   help="store first proofs in corpus layout for mining")
    _add_budget_args(p)

    p = sub.add_parser("select", help="build watchlists for a target problem")
    p.add_argument("--method", required=True,
                   choices=["art", "freq", "knn-st", "knn-dyn"])
    p.add_argument("--corpus", required=True,
                   help="directory of per-problem corpus subdirectories")
    p.add_argument("--target", required=True, help="target problem file")
    p.add_argument("--k", type=int, default=16)
    p.add_argument("--max-clauses", type=int, default=256)
    p.add_argument("--out-dir", default="watchlists")

    p = sub.add_parser("cover", help="greedy cover of a results file")
    p.add_argument("--results", required=True)
    p.add_argument("--k", type=int, default=5)
    return parser


def cmd_prove(args):
    problem = load_problem(args.problem)
    strategy = get_strategy(args.strategy)
    if args.mode:
        strategy = apply_mode(strategy, args.mode)
    watchlists = list(args.watchlist)
    if args.watchlist_dir:
        watchlists += watchlists_for(problem.name, args.watchlist_dir)
    result = run_one(problem, strategy, watchlists,
                     max_given=args.max_given, max_seconds=args.max_seconds)
    s = result.stats
    if not args.quiet:
        print("%s: %s  loops=%d generated=%d processed=%d elapsed=%.3fs"
              % (s.problem, s.result, s.loops, s.generated, s.processed,
                 s.elapsed))
        if s.progress:
            print("progress: " + " ".join("%.3f" % p for p in s.progress))
    if args.stats_out:
        from .harness import stats_to_dict
        with open(args.stats_out, "w", encoding="utf-8") as fh:
            json.dump(stats_to_dict(s), fh, indent=1)
    if result.status == PROOF:
        if args.proof_out:
            extract_watchlist(result.proof, args.proof_out)
        if not args.quiet:
            print("proof: %d steps, %d guided"
                  % (len(result.proof), result.proof.guided_steps()))
        return 0
    return 1


def cmd_corpus(args):
    strategies = load_strategy_file(args.strategies)
    rows = run_corpus(args.problems, strategies,
                      watchlist_dir=args.watchlist_dir,
                      max_given=args.max_given, max_seconds=args.max_seconds,
                      out_path=args.out, save_proofs=args.save_proofs)
    print(report(rows))
    return 0


def cmd_select(args):
    problem = load_problem(args.target)
    entries = [e for e in load_corpus(args.corpus) if e.name != problem.name]
    features = extract_features(problem.conjecture or problem.clauses)
    paths = build_watchlists(args.method, problem.name, features, entries,
                             args.out_dir, k=args.k,
                             max_clauses=args.max_clauses)
    for p in paths:
        print(p)
    return 0


def cmd_cover(args):
    rows = read_results(args.results)
    for name, added in greedy_cover(solved_sets(rows), args.k):
        print("%s\t+%d" % (name, added))
    return 0


def main(argv=None):
    args = make_parser().parse_args(argv)
    handlers = {"prove": cmd_prove, "corpus": cmd_corpus,
                "select": cmd_select, "cover": cmd_cover}
    try:
        return handlers[args.command](args)
    except Exception as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
