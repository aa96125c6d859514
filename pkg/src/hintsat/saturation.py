"""The given-clause saturation loop with watchlist-guided clause selection.

The proof state is split into processed clauses P and unprocessed clauses U.
Each iteration selects one unprocessed clause through the strategy's CEFs
(weighted round-robin over priority queues), simplifies it against P,
performs all inferences with P, and moves it into P.  Newly generated
clauses are checked against the watchlists immediately, before any
simplification, and their relevance values are frozen at that point.

The calculus is unordered binary resolution plus factoring, with optional
unordered paramodulation and equality resolution.  Equality is otherwise an
ordinary predicate.  A cheap unit-conflict check closes the common case of a
fresh unit clashing with a processed unit without waiting a full loop.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

from .fol import (DERIVED, EQ, Clause, deep_subst, rename_literals,
                  unify, unify_atoms)
from .proofs import ProofRecord, extract_proof_record
from .strategy import CEF, Strategy
from .watchlist import (MODE_DYNDEC, WatchlistGuidance, relevance1,
                        relevance2)

PROOF = "proof"
SATURATED = "saturated"
BUDGET = "budget-exhausted"


def round_half_up(x):
    """Round half away from zero (inputs here are non-negative)."""
    return int(math.floor(x + 0.5))


def priority_of(c: Clause, priority_fn: str, mode: str, uwl: bool = False):
    """Coarse integer rank consulted before the weight (smaller is better)."""
    if uwl and c.wl_matched:
        return 0
    if priority_fn == "ConstPrio":
        return 0
    if priority_fn == "PreferWatchlist":
        return 0 if c.wl_matched else 1
    if priority_fn == "DeferWatchlist":
        return 1 if c.wl_matched else 0
    if priority_fn == "PreferWatchlistRelevant":
        r = c.relevance2 if mode == MODE_DYNDEC else c.relevance0
        return round_half_up(1000.0 * (1.0 - r))
    if priority_fn == "DeferWatchlistRelevant":
        r = c.relevance2 if mode == MODE_DYNDEC else c.relevance0
        return round_half_up(1000.0 * r)
    raise ValueError("unknown priority function %r" % priority_fn)


def weight_of(c: Clause, cef: CEF):
    if cef.weight_fn == "FIFOWeight":
        return c.cid
    fw, vw, pm = cef.params
    total = 0
    for pos, nonvar, nvar in c.lit_counts:
        w = fw * nonvar + vw * nvar
        total += pm * w if pos else w
    return total


def evaluate(c: Clause, cef: CEF, guidance: WatchlistGuidance, uwl=False):
    """Evaluation triple (priority, weight, birth serial); smaller is better."""
    return (priority_of(c, cef.priority_fn, guidance.mode, uwl),
            weight_of(c, cef), c.cid)


# ---------------------------------------------------------------------------
# inference rules


def _resolvent_pairs(glits, clits, self_pair=False):
    for i, (p1, a1) in enumerate(glits):
        for j, (p2, a2) in enumerate(clits):
            if self_pair and j <= i:
                continue
            if p1 == p2 or a1[0] != a2[0] or len(a1) != len(a2):
                continue
            sub = unify_atoms(a1, a2)
            if sub is None:
                continue
            rest = tuple(l for k, l in enumerate(glits) if k != i) + \
                tuple(l for k, l in enumerate(clits) if k != j)
            yield tuple((pol, deep_subst(atom, sub)) for pol, atom in rest)


def factors(g: Clause):
    """All binary factors of g (two same-polarity literals unified, merged)."""
    lits = g.literals
    out = []
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            if lits[i][0] != lits[j][0]:
                continue
            sub = unify_atoms(lits[i][1], lits[j][1])
            if sub is None:
                continue
            rest = tuple(l for k, l in enumerate(lits) if k != j)
            out.append(tuple((pol, deep_subst(atom, sub)) for pol, atom in rest))
    return out


def equality_resolvents(g: Clause):
    lits = g.literals
    out = []
    for i, (pol, atom) in enumerate(lits):
        if pol or atom[0] != EQ or len(atom) != 3:
            continue
        sub = unify(atom[1], atom[2])
        if sub is None:
            continue
        rest = tuple(l for k, l in enumerate(lits) if k != i)
        out.append(tuple((p, deep_subst(a, sub)) for p, a in rest))
    return out


def _term_positions(t, path=()):
    # positions below a literal's argument roots; variables are not rewrite
    # targets
    if type(t) is str:
        return
    yield path, t
    for k in range(1, len(t)):
        yield from _term_positions(t[k], path + (k,))


def _replace_at(t, path, new):
    if not path:
        return new
    k = path[0]
    return t[:k] + (_replace_at(t[k], path[1:], new),) + t[k + 1:]


def _paramodulants(from_lits, into_lits):
    out = []
    for i, (pol, atom) in enumerate(from_lits):
        if not pol or atom[0] != EQ or len(atom) != 3:
            continue
        for lhs, rhs in ((atom[1], atom[2]), (atom[2], atom[1])):
            for j, (tpol, tatom) in enumerate(into_lits):
                for k in range(1, len(tatom)):
                    for path, sub_t in _term_positions(tatom[k]):
                        sub = unify(lhs, sub_t)
                        if sub is None:
                            continue
                        new_atom = tatom[:k] + \
                            (_replace_at(tatom[k], path, rhs),) + tatom[k + 1:]
                        rest = tuple(l for m, l in enumerate(from_lits) if m != i) + \
                            tuple(l for m, l in enumerate(into_lits) if m != j) + \
                            ((tpol, new_atom),)
                        out.append(tuple((p, deep_subst(a, sub))
                                         for p, a in rest))
    return out


def has_positive_equality(c: Clause):
    return any(pol and atom[0] == EQ and len(atom) == 3
               for pol, atom in c.literals)


def generate(g: Clause, partners, paramod=False):
    """All inferences with g and the partner clauses as premises.

    Returns (literal tuple, rule, parents) triples in a fixed enumeration
    order: factors and (optionally) equality resolvents of g, then self
    inferences, then per partner in ascending clause id.
    """
    out = []
    for lits in factors(g):
        out.append((lits, "factoring", (g.cid,)))
    if paramod:
        for lits in equality_resolvents(g):
            out.append((lits, "equality_resolution", (g.cid,)))
    gren = g.renamed_apart()
    for lits in _resolvent_pairs(g.literals, gren, self_pair=True):
        out.append((lits, "resolution", (g.cid, g.cid)))
    if paramod and has_positive_equality(g):
        for lits in _paramodulants(g.literals, gren):
            out.append((lits, "paramodulation", (g.cid, g.cid)))
    for c in sorted(partners, key=lambda x: x.cid):
        if c.cid == g.cid:
            continue
        cren = c.renamed_apart()
        for lits in _resolvent_pairs(g.literals, cren):
            out.append((lits, "resolution", (g.cid, c.cid)))
        if paramod:
            if has_positive_equality(g):
                for lits in _paramodulants(g.literals, cren):
                    out.append((lits, "paramodulation", (g.cid, c.cid)))
            if has_positive_equality(c):
                for lits in _paramodulants(cren, g.literals):
                    out.append((lits, "paramodulation", (c.cid, g.cid)))
    return out


def is_tautology(literals):
    """Syntactic complementary pair, or a positive t = t literal."""
    seen = set()
    for pol, atom in literals:
        if pol and atom[0] == EQ and len(atom) == 3 and atom[1] == atom[2]:
            return True
        if (not pol, atom) in seen:
            return True
        seen.add((pol, atom))
    return False


# ---------------------------------------------------------------------------
# search state


def _lit_root(atom):
    if len(atom) == 1:
        return "#none"
    a0 = atom[1]
    return "#var" if type(a0) is str else a0[0]


@dataclass
class RunStats:
    """Per-run summary row; PPS is processed clauses per second."""

    problem: str
    strategy: str
    result: str
    loops: int
    generated: int
    processed: int
    elapsed: float
    pps: float
    wl_total: int
    wl_in_proof: int
    progress: tuple
    proof_length: int = 0
    error: str = ""


@dataclass
class SaturationResult:
    status: str
    proof: ProofRecord | None
    stats: RunStats
    clauses: dict
    guidance: WatchlistGuidance
    given_sequence: list


class _Queue:
    __slots__ = ("cef", "heap")

    def __init__(self, cef):
        self.cef = cef
        self.heap = []


class SearchState:
    """Processed/unprocessed clause sets plus the per-CEF queues."""

    def __init__(self, strategy: Strategy, guidance: WatchlistGuidance):
        from .subsumption import WatchlistIndex

        self.strategy = strategy
        self.guidance = guidance
        self.clauses = {}
        self.serial = 0
        self.queues = [_Queue(cef) for cef in strategy.cefs]
        self.selected = set()
        self.in_u = set()
        self.sched_idx = 0
        self.sched_left = strategy.cefs[0].freq
        # processed-set indexes
        self.p = {}
        self.p_by_predpol = {}
        self.p_by_root = {}
        self.p_units_ground = {}
        self.p_units_var = []
        self.p_eq = []
        self.p_postings = {}
        self.p_rest = WatchlistIndex()
        self.loops = 0
        self.generated = 0
        self.processed = 0

    # -- registration ------------------------------------------------------

    def new_clause(self, literals, origin=DERIVED, rule="input", parents=(),
                   name=None, normalized=False):
        c = Clause(literals, cid=self.serial, origin=origin, parents=parents,
                   rule=rule, name=name, normalized=normalized)
        self.serial += 1
        self.clauses[c.cid] = c
        self.generated += 1
        event = self.guidance.record_generated(c)
        c.wl_matched = bool(event.matched)
        c.wl_matches = event.matched
        c.relevance0 = event.relevance0
        parent_rel = [self.clauses[p].relevance1 for p in parents]
        c.relevance1 = relevance1(c.relevance0, parent_rel, self.guidance.delta)
        c.relevance2 = relevance2(c.relevance1, c.length, self.guidance.alpha,
                                  self.guidance.beta)
        return c

    def enqueue(self, c: Clause):
        uwl = self.strategy.uwl
        for q in self.queues:
            heapq.heappush(q.heap, evaluate(c, q.cef, self.guidance, uwl))
        self.in_u.add(c.cid)

    # -- selection ---------------------------------------------------------

    def select_given(self):
        if not self.in_u:
            return None
        while True:
            q = self.queues[self.sched_idx]
            heap = q.heap
            while heap and heap[0][2] in self.selected:
                heapq.heappop(heap)
            if heap:
                _, _, cid = heapq.heappop(heap)
                self.selected.add(cid)
                self.in_u.discard(cid)
                self._advance()
                return self.clauses[cid]
            # queue drained: every live clause sits in every queue, so this
            # only happens when U is empty
            if not self.in_u:
                return None
            self._advance(force=True)

    def _advance(self, force=False):
        self.sched_left -= 1
        if force or self.sched_left <= 0:
            self.sched_idx = (self.sched_idx + 1) % len(self.queues)
            self.sched_left = self.queues[self.sched_idx].cef.freq

    # -- processed-set maintenance -----------------------------------------

    def p_add(self, c: Clause):
        self.p[c.cid] = c
        counts = c.lit_counts
        for i, (pol, atom) in enumerate(c.literals):
            pred = atom[0]
            self.p_by_predpol.setdefault((pred, pol), []).append(c.cid)
            self.p_by_root.setdefault((pred, pol, _lit_root(atom)),
                                      []).append(c.cid)
            if counts[i][2] == 0:
                self.p_postings.setdefault((pol, atom), []).append(c.cid)
        if len(c.literals) == 1 and c.is_ground:
            self.p_units_ground[c.literals[0]] = c.cid
        else:
            self.p_rest.insert("P", c.cid, c)
            if len(c.literals) == 1:
                self.p_units_var.append(c.cid)
        if has_positive_equality(c):
            self.p_eq.append(c.cid)

    def p_remove(self, cid):
        c = self.p.pop(cid)
        if not (len(c.literals) == 1 and c.is_ground):
            self.p_rest.kill("P", cid)
        # bucket lists keep tombstones; readers filter on membership in p

    def resolution_partners(self, g: Clause):
        """Processed clauses holding a literal complementary to one of g's."""
        found = {}
        for pol, atom in g.literals:
            pred = atom[0]
            comp = not pol
            if len(atom) == 1:
                rows = (self.p_by_predpol.get((pred, comp), ()),)
            else:
                root = _lit_root(atom)
                if root == "#var":
                    rows = (self.p_by_predpol.get((pred, comp), ()),)
                else:
                    rows = (self.p_by_root.get((pred, comp, root), ()),
                            self.p_by_root.get((pred, comp, "#var"), ()))
            for row in rows:
                for cid in row:
                    if cid in self.p:
                        found[cid] = True
        return [self.p[cid] for cid in found]

    def paramod_partners(self, g: Clause):
        if has_positive_equality(g):
            return list(self.p.values())
        return [self.p[cid] for cid in self.p_eq if cid in self.p]

    # -- simplification ----------------------------------------------------

    def subsumed_by_processed(self, c: Clause):
        from .subsumption import _subsumes_literals

        lits = c.literals
        n = len(lits)
        # exact ground-unit subsumers
        for lit in lits:
            cid = self.p_units_ground.get(lit)
            if cid is not None and cid in self.p:
                return True
        # ground multi-literal subsumers found through their literals
        seen = set()
        for lit in lits:
            for cid in self.p_postings.get(lit, ()):
                if cid in seen or cid not in self.p:
                    continue
                seen.add(cid)
                d = self.p[cid]
                if d.is_ground and 1 < len(d.literals) <= n and \
                        _subsumes_literals(d.literals, lits):
                    return True
        # everything non-ground goes through the feature-vector index
        return self.p_rest.first_subsuming(c) is not None

    def forward_keep(self, c: Clause):
        if is_tautology(c.literals):
            return False
        return not self.subsumed_by_processed(c)

    def backward_simplify(self, g: Clause):
        """Remove processed clauses subsumed by g; returns removed ids."""
        from .subsumption import _subsumes_literals

        removed = []
        glits = g.literals
        if g.is_ground:
            cands = dict.fromkeys(
                cid for cid in self.p_postings.get(glits[0], ())
                if cid in self.p and cid != g.cid)
            for cid in cands:
                d = self.p[cid]
                if len(d.literals) >= len(glits) and \
                        _subsumes_literals(glits, d.literals):
                    removed.append(cid)
        else:
            for entry in self.p_rest.find_subsumed(g):
                cid = entry[1]
                if cid in self.p and cid != g.cid:
                    removed.append(cid)
            if len(glits) == 1:
                pol, atom = glits[0]
                root = _lit_root(atom)
                if root == "#var":
                    row = self.p_by_predpol.get((atom[0], pol), ())
                else:
                    row = self.p_by_root.get((atom[0], pol, root), ())
                sub = {}
                from .subsumption import match_term
                for cid in row:
                    if cid in self.p and cid != g.cid and cid not in removed:
                        d = self.p[cid]
                        if len(d.literals) == 1 and d.is_ground and \
                                d.literals[0][0] == pol:
                            sub.clear()
                            if match_term(atom, d.literals[0][1], sub) is not None:
                                removed.append(cid)
        for cid in removed:
            self.p_remove(cid)
        return removed

    def unit_conflict(self, c: Clause):
        """A processed unit complementary-unifiable with unit c, if any."""
        pol, atom = c.literals[0]
        comp = (not pol, atom)
        if c.is_ground:
            cid = self.p_units_ground.get(comp)
            if cid is not None and cid in self.p:
                return cid
        for cid in self.p_units_var:
            if cid not in self.p:
                continue
            dpol, datom = self.p[cid].renamed_apart()[0]
            if dpol != pol and unify_atoms(atom, datom) is not None:
                return cid
        return None


# ---------------------------------------------------------------------------
# the main loop


def backward_simplify(g: Clause, state: SearchState):
    return state.backward_simplify(g)


def forward_simplify(c: Clause, state: SearchState):
    """keep-or-discard for a clause against the processed set."""
    return state.forward_keep(c)


def saturate(problem, strategy: Strategy, guidance: WatchlistGuidance = None,
             max_given=10000, max_seconds=None) -> SaturationResult:
    """Run the given-clause loop on a problem under a strategy.

    Returns a proof record if the empty clause is derived, 'saturated' if U
    empties, else 'budget-exhausted'.  Runs are deterministic for a fixed
    problem/strategy/max_given; max_seconds is a secondary wall-clock cap.
    """
    if max_given is not None and max_given <= 0:
        raise ValueError("max_given must be positive")
    if max_seconds is not None and max_seconds <= 0:
        raise ValueError("max_seconds must be positive")
    if not problem.clauses:
        raise ValueError("empty problem")
    if guidance is None:
        guidance = WatchlistGuidance(mode=strategy.mode, ska=strategy.ska,
                                     no_remove=strategy.no_remove,
                                     delta=strategy.delta,
                                     alpha=strategy.alpha, beta=strategy.beta)
    state = SearchState(strategy, guidance)
    start = time.perf_counter()
    given_sequence = []
    empty_cid = None

    for c in problem.clauses:
        nc = state.new_clause(c.literals, origin=c.origin, rule="input",
                              parents=(), name=c.name, normalized=True)
        if nc.is_empty:
            empty_cid = nc.cid
            break
        state.enqueue(nc)

    while empty_cid is None:
        if max_given is not None and state.loops >= max_given:
            status = BUDGET
            break
        if max_seconds is not None and \
                time.perf_counter() - start > max_seconds:
            status = BUDGET
            break
        g = state.select_given()
        if g is None:
            status = SATURATED
            break
        state.loops += 1
        given_sequence.append(g.cid)
        if not state.forward_keep(g):
            continue
        state.backward_simplify(g)
        state.p_add(g)
        state.processed += 1

        partners = state.resolution_partners(g)
        if strategy.paramod:
            extra = {c.cid for c in partners}
            for c in state.paramod_partners(g):
                if c.cid not in extra:
                    partners.append(c)
        for lits, rule, parents in generate(g, partners,
                                            paramod=strategy.paramod):
            child = state.new_clause(lits, rule=rule, parents=parents)
            if child.is_empty:
                empty_cid = child.cid
                break
            if not state.forward_keep(child):
                continue
            if len(child.literals) == 1:
                other = state.unit_conflict(child)
                if other is not None:
                    bottom = state.new_clause((), rule="resolution",
                                              parents=(child.cid, other))
                    state.enqueue(child)
                    empty_cid = bottom.cid
                    break
            state.enqueue(child)
        if empty_cid is not None:
            break

    elapsed = time.perf_counter() - start
    proof = None
    if empty_cid is not None:
        status = PROOF
        proof = extract_proof_record(problem.name, state.clauses, empty_cid)
    stats = RunStats(
        problem=problem.name,
        strategy=strategy.name or strategy.render(),
        result=status,
        loops=state.loops,
        generated=state.generated,
        processed=state.processed,
        elapsed=elapsed,
        pps=state.processed / max(elapsed, 1e-9),
        wl_total=guidance.total_matched_clauses,
        wl_in_proof=proof.guided_steps() if proof else 0,
        progress=guidance.progress_vector(),
        proof_length=len(proof) if proof else 0,
    )
    return SaturationResult(status=status, proof=proof, stats=stats,
                            clauses=state.clauses, guidance=guidance,
                            given_sequence=given_sequence)
