"""Batch proof search over problem sets, result files, and cover analysis.

Results are line-delimited JSON with a versioned header record.  Field order
is fixed (see RESULT_FIELDS); the elapsed and pps fields are wall-clock
measurements and are the only fields allowed to differ between identical
reruns.
"""

from __future__ import annotations

import glob
import json
import os
import time
import traceback
from dataclasses import dataclass

from .fol import Problem
from .saturation import PROOF, RunStats, SaturationResult, saturate
from .selection import save_corpus_entry
from .strategy import Strategy, get_strategy
from .tptp import parse_cnf
from .watchlist import WatchlistGuidance, load_watchlists

RESULTS_FORMAT = "hintsat-results"
RESULTS_VERSION = 1

RESULT_FIELDS = [
    "problem", "strategy", "result", "loops", "generated", "processed",
    "elapsed", "pps", "wl_total", "wl_in_proof", "progress", "proof_length",
    "error",
]

TIMING_FIELDS = ("elapsed", "pps")


def stats_to_dict(s: RunStats):
    d = {}
    for f in RESULT_FIELDS:
        v = getattr(s, f)
        if f == "progress":
            v = [round(x, 6) for x in v]
        d[f] = v
    return d


def stats_from_dict(d):
    kw = dict(d)
    kw["progress"] = tuple(kw.get("progress", ()))
    return RunStats(**kw)


def write_results(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        _write_header(fh)
        for r in rows:
            fh.write(json.dumps(stats_to_dict(r)) + "\n")


def _write_header(fh):
    header = {"format": RESULTS_FORMAT, "version": RESULTS_VERSION,
              "fields": RESULT_FIELDS}
    fh.write(json.dumps(header) + "\n")


def read_results(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("format") != RESULTS_FORMAT:
            raise ValueError("%s: not a results file" % path)
        for line in fh:
            if line.strip():
                rows.append(stats_from_dict(json.loads(line)))
    return rows


def load_problem(path) -> Problem:
    name = os.path.splitext(os.path.basename(path))[0]
    with open(path, encoding="utf-8") as fh:
        return parse_cnf(fh.read(), name=name)


def watchlists_for(problem_name, watchlist_dir):
    """Watchlist files for a problem: a per-problem subdirectory when
    present, otherwise every .p file in the directory itself."""
    if not watchlist_dir:
        return []
    sub = os.path.join(watchlist_dir, problem_name)
    if os.path.isdir(sub):
        return sorted(glob.glob(os.path.join(sub, "*.p")))
    return sorted(glob.glob(os.path.join(watchlist_dir, "*.p")))


def run_one(problem, strategy: Strategy, watchlist_paths=(),
            max_given=10000, max_seconds=None) -> SaturationResult:
    """One saturation run with watchlists loaded per the strategy flags."""
    if watchlist_paths:
        guidance = load_watchlists(watchlist_paths, mode=strategy.mode,
                                   no_remove=strategy.no_remove,
                                   ska=strategy.ska, delta=strategy.delta,
                                   alpha=strategy.alpha, beta=strategy.beta)
    else:
        guidance = None
    return saturate(problem, strategy, guidance=guidance,
                    max_given=max_given, max_seconds=max_seconds)


def run_corpus(problems_dir, strategies, watchlist_dir=None, max_given=10000,
               max_seconds=None, out_path=None, save_proofs=None,
               on_result=None):
    """One RunStats per (problem, strategy); failures stay per-run.

    ``strategies`` is a list of Strategy objects (carry their names).
    Results are appended to ``out_path`` incrementally as runs finish.  With
    ``save_proofs`` set, the first proof found for each problem is stored in
    corpus layout (problem.p / proof.p / provenance.json) for later mining.
    """
    if max_given is not None and max_given <= 0:
        raise ValueError("max_given must be positive")
    paths = sorted(glob.glob(os.path.join(problems_dir, "*.p")))
    rows = []
    fh = None
    if out_path:
        fh = open(out_path, "w", encoding="utf-8")
        _write_header(fh)
    saved = set()
    try:
        for path in paths:
            pname = os.path.splitext(os.path.basename(path))[0]
            for strategy in strategies:
                try:
                    problem = load_problem(path)
                    wl = watchlists_for(pname, watchlist_dir)
                    result = run_one(problem, strategy, wl,
                                     max_given=max_given,
                                     max_seconds=max_seconds)
                    stats = result.stats
                    if save_proofs and result.status == PROOF and \
                            pname not in saved:
                        with open(path, encoding="utf-8") as pf:
                            save_corpus_entry(save_proofs, pname, pf.read(),
                                              result.proof)
                        saved.add(pname)
                except Exception as exc:  # isolated per run
                    stats = RunStats(
                        problem=pname, strategy=strategy.name or "?",
                        result="error", loops=0, generated=0, processed=0,
                        elapsed=0.0, pps=0.0, wl_total=0, wl_in_proof=0,
                        progress=(), error="%s: %s" % (type(exc).__name__, exc))
                rows.append(stats)
                if fh:
                    fh.write(json.dumps(stats_to_dict(stats)) + "\n")
                    fh.flush()
                if on_result:
                    on_result(stats)
    finally:
        if fh:
            fh.close()
    return rows


# ---------------------------------------------------------------------------
# analysis


def solved_sets(rows):
    """Map strategy name -> set of problems it proved."""
    out = {}
    for r in rows:
        out.setdefault(r.strategy, set())
        if r.result == PROOF:
            out[r.strategy].add(r.problem)
    return out


def greedy_cover(solved, k):
    """Greedy portfolio: repeatedly add the strategy covering the most
    yet-unsolved problems (ties by name ascending); returns (name, added)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    covered = set()
    remaining = dict(solved)
    picks = []
    for _ in range(min(k, len(remaining))):
        best = None
        best_gain = -1
        for name in sorted(remaining):
            gain = len(remaining[name] - covered)
            if gain > best_gain:
                best = name
                best_gain = gain
        picks.append((best, best_gain))
        covered |= remaining.pop(best)
    return picks


def report(rows, cover_k=5):
    """Human-readable summary of a results table."""
    by_strategy = {}
    for r in rows:
        by_strategy.setdefault(r.strategy, []).append(r)
    solved = solved_sets(rows)
    lines = []
    lines.append("runs: %d   problems: %d   strategies: %d"
                 % (len(rows), len({r.problem for r in rows}),
                    len(by_strategy)))
    for name in sorted(by_strategy):
        rs = by_strategy[name]
        n_solved = len(solved.get(name, ()))
        pps = [r.pps for r in rs if r.result != "error"]
        mean_pps = sum(pps) / len(pps) if pps else 0.0
        ratios = [r.wl_in_proof / r.proof_length
                  for r in rs if r.result == PROOF and r.proof_length]
        guided = (sum(ratios) / len(ratios)) if ratios else 0.0
        lines.append("  %-28s solved %3d/%3d   mean PPS %8.0f   "
                     "guidance ratio %.3f"
                     % (name, n_solved, len(rs), mean_pps, guided))
    union = set()
    for s in solved.values():
        union |= s
    lines.append("union solved: %d" % len(union))
    if solved:
        lines.append("greedy cover:")
        for name, added in greedy_cover(solved, cover_k):
            lines.append("  %-28s +%d" % (name, added))
    errors = [r for r in rows if r.result == "error"]
    if errors:
        lines.append("errors: %d" % len(errors))
    return "\n".join(lines)


def load_strategy_file(path):
    """Strategy file: one per line, either 'name = spec' or a builtin name.

    Lines starting with # or % are comments.
    """
    strategies = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith(("#", "%")):
                continue
            if "=" in line and not line.startswith("-"):
                name, spec = line.split("=", 1)
                from dataclasses import replace
                strategies.append(replace(get_strategy(spec.strip()),
                                          name=name.strip()))
            else:
                strategies.append(get_strategy(line))
    return strategies
