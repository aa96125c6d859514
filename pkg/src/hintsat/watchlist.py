"""Watchlist guidance: progress counters and dynamic relevance.

A watchlist is an indexed set of target clauses with a progress counter
counting how many *distinct* entries have been subsumed by generated clauses
so far.  The vector of completion ratios progress(W)/|W| over all loaded
watchlists is the evolving representation of the proof search state; the
relevance scores computed here turn it into clause priorities.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .fol import DEFAULT_SKOLEM_PREFIXES
from .subsumption import WatchlistIndex, ska_literals

MODE_STATIC = "static"
MODE_DYN = "dyn"
MODE_DYNDEC = "dyndec"

# decay / threshold defaults used throughout
DEFAULT_DELTA = 0.1
DEFAULT_ALPHA = 0.03
DEFAULT_BETA = 0.009


@dataclass
class MatchEvent:
    """Outcome of checking one generated clause against the watchlists."""

    clause_id: int
    literals: tuple
    matched: tuple  # ((wid, entry cid), ...)
    relevance0: float


class Watchlist:
    """One loaded watchlist: clauses, encountered flags, progress counter."""

    def __init__(self, wid, source, clauses):
        self.wid = wid
        self.source = source
        self.clauses = list(clauses)
        self.encountered = [False] * len(self.clauses)
        self.progress = 0

    @property
    def size(self):
        return len(self.clauses)

    @property
    def completion(self):
        return self.progress / self.size


def relevance0(watchlists, matched_wids):
    """Maximum completion ratio over the matched watchlists (0 if none).

    Counters must already reflect the current clause's own matches.
    """
    if not matched_wids:
        return 0.0
    return max(watchlists[w].completion for w in matched_wids)


def relevance1(own_relevance0, parent_relevances, delta):
    """Standard relevance plus decayed average of the parents' relevance1."""
    if not parent_relevances:
        return own_relevance0
    return own_relevance0 + delta * (sum(parent_relevances) / len(parent_relevances))


def relevance2(r1, length, alpha, beta):
    """Thresholded relevance: reset to 0 when both alpha and beta tests fail."""
    if length <= 0:
        return r1
    if r1 < alpha and r1 / length < beta:
        return 0.0
    return r1


class WatchlistGuidance:
    """All loaded watchlists plus the shared subsumption index.

    Owned by a single saturation run.  ``record_generated`` must be called
    exactly once per generated clause, before the clause is queued.
    """

    def __init__(self, watchlists=(), mode=MODE_STATIC, no_remove=False,
                 ska=False, delta=DEFAULT_DELTA, alpha=DEFAULT_ALPHA,
                 beta=DEFAULT_BETA, skolem_prefixes=DEFAULT_SKOLEM_PREFIXES,
                 brute_index=False):
        self.mode = mode
        self.no_remove = no_remove
        self.ska = ska
        self.delta = delta
        self.alpha = alpha
        self.beta = beta
        self.skolem_prefixes = tuple(skolem_prefixes)
        self.watchlists = {}
        self.index = WatchlistIndex(ska=ska, skolem_prefixes=skolem_prefixes,
                                    brute=brute_index)
        self.log = []
        self.total_matched_clauses = 0
        for wl in watchlists:
            self.add_watchlist(wl)

    @property
    def empty(self):
        return not self.watchlists

    def add_watchlist(self, wl: Watchlist):
        if wl.size == 0:
            # dropped: a 0/0 completion ratio is meaningless
            return
        if wl.wid in self.watchlists:
            raise ValueError("duplicate watchlist id %r" % wl.wid)
        self.watchlists[wl.wid] = wl
        for i, c in enumerate(wl.clauses):
            self.index.insert(wl.wid, i, c)

    def record_generated(self, clause) -> MatchEvent:
        """Match a freshly generated clause against all alive entries.

        Updates progress counters, marks entries encountered, retires them
        from the index unless no-remove is on, and returns the MatchEvent
        with the resulting relevance0.
        """
        if self.empty:
            event = MatchEvent(clause.cid, clause.literals, (), 0.0)
            self.log.append(event)
            return event
        if clause.is_empty:
            # the empty clause vacuously subsumes everything; for progress
            # bookkeeping it only stands for the final step of each proof
            matched = tuple((w.wid, i) for w in self.watchlists.values()
                            for i, c in enumerate(w.clauses)
                            if c.is_empty and (self.no_remove
                                               or not w.encountered[i]))
        else:
            matched = tuple(self.index.find_subsumed(clause))
        matched_wids = []
        for wid, i in matched:
            wl = self.watchlists[wid]
            if wid not in matched_wids:
                matched_wids.append(wid)
            if not wl.encountered[i]:
                wl.encountered[i] = True
                wl.progress += 1
                if not self.no_remove:
                    self.index.kill(wid, i)
        r0 = relevance0(self.watchlists, matched_wids)
        event = MatchEvent(clause.cid, clause.literals, matched, r0)
        self.log.append(event)
        if matched:
            self.total_matched_clauses += 1
        return event

    def progress_vector(self):
        """Completion ratios in load order."""
        return tuple(w.completion for w in self.watchlists.values())

    def progress_counts(self):
        return tuple((w.wid, w.progress, w.size) for w in self.watchlists.values())

    def any_complete(self):
        return any(w.progress == w.size for w in self.watchlists.values())


def load_watchlists(paths, mode=MODE_STATIC, no_remove=False, ska=False,
                    delta=DEFAULT_DELTA, alpha=DEFAULT_ALPHA,
                    beta=DEFAULT_BETA, skolem_prefixes=DEFAULT_SKOLEM_PREFIXES,
                    brute_index=False) -> WatchlistGuidance:
    """Load watchlist files (one watchlist per file; stem is the id).

    In static mode all files are concatenated into a single watchlist; in
    dyn/dyndec modes each file keeps its own progress counter.  Empty files
    yield size-0 watchlists and are dropped.
    """
    from .tptp import parse_cnf

    guidance = WatchlistGuidance(mode=mode, no_remove=no_remove, ska=ska,
                                 delta=delta, alpha=alpha, beta=beta,
                                 skolem_prefixes=skolem_prefixes,
                                 brute_index=brute_index)
    collected = []
    for path in paths:
        stem = os.path.splitext(os.path.basename(path))[0]
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        if not text.strip():
            continue
        try:
            problem = parse_cnf(text, name=stem)
        except ValueError as exc:
            raise ValueError("%s: %s" % (path, exc)) from exc
        if mode == MODE_STATIC:
            collected.extend(problem.clauses)
        else:
            guidance.add_watchlist(Watchlist(stem, stem, problem.clauses))
    if mode == MODE_STATIC and collected:
        guidance.add_watchlist(Watchlist("static", "static", collected))
    return guidance


def replay_match_log(watchlist_clauses, log, no_remove=False, ska=False,
                     skolem_prefixes=DEFAULT_SKOLEM_PREFIXES):
    """Independent recomputation of counters/relevance0 from a match log.

    ``watchlist_clauses`` maps wid -> list of clauses as originally loaded.
    Replays every MatchEvent with naive all-pairs subsumption (no index) and
    returns (final {wid: progress}, [relevance0 per event]).  Used as the
    oracle for the indexed implementation.
    """
    from .subsumption import _subsumes_literals

    def prep(lits):
        return ska_literals(lits, skolem_prefixes) if ska else lits

    alive = {}
    encountered = {}
    progress = {}
    sizes = {}
    for wid, clauses in watchlist_clauses.items():
        if not clauses:
            continue
        alive[wid] = [True] * len(clauses)
        encountered[wid] = [False] * len(clauses)
        progress[wid] = 0
        sizes[wid] = len(clauses)
    prepped = {wid: [prep(c.literals) for c in clauses]
               for wid, clauses in watchlist_clauses.items()}

    relevances = []
    for event in log:
        qlits = prep(event.literals)
        matched_wids = []
        for wid in alive:
            for i, entry_lits in enumerate(prepped[wid]):
                if not alive[wid][i]:
                    continue
                if qlits == () and entry_lits != ():
                    continue  # empty clause counts only against empty entries
                if _subsumes_literals(qlits, entry_lits):
                    if wid not in matched_wids:
                        matched_wids.append(wid)
                    if not encountered[wid][i]:
                        encountered[wid][i] = True
                        progress[wid] += 1
                        if not no_remove:
                            alive[wid][i] = False
        if matched_wids:
            r0 = max(progress[w] / sizes[w] for w in matched_wids)
        else:
            r0 = 0.0
        relevances.append(r0)
    return progress, relevances
