"""Clause subsumption and a feature-vector index over watchlist clauses.

Subsumption here is multiset subsumption: C subsumes D iff some substitution
sigma maps C's literal multiset injectively into D's with equal polarity and
atoms.  The ``ska`` variant widens matching by treating all skolem symbols of
the same arity as one symbol; it is implemented by rewriting both clauses
with arity-canonical skolem tokens and running the standard matcher, so the
two variants cannot drift apart.

The index keeps one numeric feature vector per entry.  Every tracked feature
f satisfies f(C) <= f(D) whenever C subsumes D, so walking the trie for
entries componentwise >= the query vector yields a candidate superset of the
truly subsumed entries; candidates are then confirmed literal-by-literal.
"""

from __future__ import annotations

import zlib

from .fol import DEFAULT_SKOLEM_PREFIXES, is_skolem, rename_term

_N_BUCKETS = 7
_FEATURE_LEN = 4 + _N_BUCKETS
_CAP = 63


def ska_symbol(arity):
    # '#' cannot occur in parsed identifiers, so this never collides
    return "sk#%d" % arity


def ska_term(t, prefixes=DEFAULT_SKOLEM_PREFIXES):
    if type(t) is str:
        return t
    sym = t[0]
    if is_skolem(sym, prefixes):
        sym = ska_symbol(len(t) - 1)
    if len(t) == 1:
        return (sym,)
    return (sym,) + tuple(ska_term(a, prefixes) for a in t[1:])


def ska_literals(literals, prefixes=DEFAULT_SKOLEM_PREFIXES):
    return tuple((pol, ska_term(atom, prefixes)) for pol, atom in literals)


def _clause_ska_literals(c, prefixes):
    cached = c._ska_literals
    if cached is None:
        cached = ska_literals(c.literals, prefixes)
        c._ska_literals = cached
    return cached


# ---------------------------------------------------------------------------
# matching


def match_term(pat, tgt, sub):
    """One-way match: bind pat's variables to subterms of tgt.

    tgt's variables act as constants.  Returns the extended substitution or
    None; sub is not mutated on failure paths beyond trailing bindings the
    caller is expected to discard (callers pass throwaway dicts).
    """
    stack = [(pat, tgt)]
    while stack:
        p, t = stack.pop()
        if type(p) is str:
            bound = sub.get(p)
            if bound is None:
                sub[p] = t
            elif bound != t:
                return None
            continue
        if type(t) is str or p[0] != t[0] or len(p) != len(t):
            return None
        if len(p) > 1:
            stack.extend(zip(p[1:], t[1:]))
    return sub


def _subsumes_literals(clits, dlits):
    """Backtracking multiset subsumption over literal tuples."""
    nc, nd = len(clits), len(dlits)
    if nc > nd:
        return False
    if nc == 0:
        return True
    # candidate target positions per c-literal; fail fast on empty
    cands = []
    for pol, atom in clits:
        row = [j for j, (dpol, datom) in enumerate(dlits)
               if dpol == pol and datom[0] == atom[0] and len(datom) == len(atom)]
        if not row:
            return False
        cands.append(((pol, atom), row))
    cands.sort(key=lambda pr: len(pr[1]))

    used = [False] * nd

    def walk(i, sub):
        if i == len(cands):
            return True
        (pol, atom), row = cands[i]
        for j in row:
            if used[j]:
                continue
            new = dict(sub)
            if match_term(atom, dlits[j][1], new) is not None:
                used[j] = True
                if walk(i + 1, new):
                    return True
                used[j] = False
        return False

    return walk(0, {})


def subsumes(c, d, ska=False, skolem_prefixes=DEFAULT_SKOLEM_PREFIXES):
    """Does clause c subsume clause d (multiset subsumption)?

    Accepts Clause objects or bare literal tuples.
    """
    clits = c.literals if hasattr(c, "literals") else tuple(c)
    dlits = d.literals if hasattr(d, "literals") else tuple(d)
    if ska:
        if hasattr(c, "literals"):
            clits = _clause_ska_literals(c, skolem_prefixes)
        else:
            clits = ska_literals(clits, skolem_prefixes)
        if hasattr(d, "literals"):
            dlits = _clause_ska_literals(d, skolem_prefixes)
        else:
            dlits = ska_literals(dlits, skolem_prefixes)
    return _subsumes_literals(clits, dlits)


# ---------------------------------------------------------------------------
# feature vectors


def _bucket(symbol):
    return zlib.crc32(symbol.encode()) % _N_BUCKETS


def literal_features(literals):
    """(neg, pos, symbol count, max depth, bucketed per-symbol counts)."""
    neg = pos = total = depth = 0
    buckets = [0] * _N_BUCKETS
    for pol, atom in literals:
        if pol:
            pos += 1
        else:
            neg += 1
        stack = [(atom, 1)]
        while stack:
            t, d = stack.pop()
            total += 1
            if d > depth:
                depth = d
            if type(t) is str:
                continue
            buckets[_bucket(t[0])] += 1
            if len(t) > 1:
                stack.extend((a, d + 1) for a in t[1:])
    feats = [neg, pos, total, depth] + buckets
    return tuple(min(f, _CAP) for f in feats)


def clause_features(c, ska=False, skolem_prefixes=DEFAULT_SKOLEM_PREFIXES):
    if ska:
        return literal_features(_clause_ska_literals(c, skolem_prefixes))
    if c._features is None:
        c._features = literal_features(c.literals)
    return c._features


class _Entry:
    __slots__ = ("serial", "wid", "cid", "clause", "match_lits", "features",
                 "alive")

    def __init__(self, serial, wid, cid, clause, match_lits, features):
        self.serial = serial
        self.wid = wid
        self.cid = cid
        self.clause = clause
        self.match_lits = match_lits
        self.features = features
        self.alive = True


class WatchlistIndex:
    """Feature-vector trie over watchlist clauses.

    Retrieval never misses: for any query clause C the candidate set contains
    every alive entry D with C subsuming D.  A brute-force mode (``brute=True``)
    bypasses the trie and scans all entries; it exists for oracle testing.
    """

    def __init__(self, ska=False, skolem_prefixes=DEFAULT_SKOLEM_PREFIXES,
                 brute=False):
        self.ska = ska
        self.skolem_prefixes = tuple(skolem_prefixes)
        self.brute = brute
        self.entries = {}
        self._root = {}
        self._serial = 0

    def __len__(self):
        return len(self.entries)

    def insert(self, wid, cid, clause):
        key = (wid, cid)
        if key in self.entries:
            raise ValueError("duplicate watchlist entry %r" % (key,))
        if self.ska:
            match_lits = ska_literals(clause.literals, self.skolem_prefixes)
            features = literal_features(match_lits)
        else:
            match_lits = clause.literals
            features = clause_features(clause)
        entry = _Entry(self._serial, wid, cid, clause, match_lits, features)
        self._serial += 1
        self.entries[key] = entry
        node = self._root
        for f in features[:-1]:
            nxt = node.get(f)
            if nxt is None:
                nxt = {}
                node[f] = nxt
            node = nxt
        node.setdefault(features[-1], []).append(entry)
        return entry

    def kill(self, wid, cid):
        self.entries[(wid, cid)].alive = False

    def alive_entries(self):
        return [e for e in self.entries.values() if e.alive]

    def candidates(self, features):
        """All alive entries whose feature vector dominates ``features``."""
        out = []
        stack = [(self._root, 0)]
        last = _FEATURE_LEN - 1
        while stack:
            node, depth = stack.pop()
            fmin = features[depth]
            if depth == last:
                for key, leaf in node.items():
                    if key >= fmin:
                        out.extend(e for e in leaf if e.alive)
            else:
                for key, child in node.items():
                    if key >= fmin:
                        stack.append((child, depth + 1))
        return out

    def find_subsumed(self, clause, query_lits=None):
        """Alive entries subsumed by ``clause`` as (wid, cid) pairs.

        Results are ordered by entry insertion order.  ``query_lits`` lets
        callers pass a pre-rewritten literal tuple.
        """
        if query_lits is None:
            if self.ska:
                query_lits = _clause_ska_literals(clause, self.skolem_prefixes)
            else:
                query_lits = clause.literals
        if self.brute:
            cands = self.alive_entries()
        else:
            cands = self.candidates(literal_features(query_lits))
        hits = [e for e in cands if _subsumes_literals(query_lits, e.match_lits)]
        hits.sort(key=lambda e: e.serial)
        return [(e.wid, e.cid) for e in hits]

    def candidates_dominated(self, features):
        """All alive entries whose feature vector is componentwise <=."""
        out = []
        stack = [(self._root, 0)]
        last = _FEATURE_LEN - 1
        while stack:
            node, depth = stack.pop()
            fmax = features[depth]
            if depth == last:
                for key, leaf in node.items():
                    if key <= fmax:
                        out.extend(e for e in leaf if e.alive)
            else:
                for key, child in node.items():
                    if key <= fmax:
                        stack.append((child, depth + 1))
        return out

    def first_subsuming(self, clause, query_lits=None):
        """Some alive entry that subsumes ``clause``, or None."""
        if query_lits is None:
            if self.ska:
                query_lits = _clause_ska_literals(clause, self.skolem_prefixes)
            else:
                query_lits = clause.literals
        if self.brute:
            cands = self.alive_entries()
        else:
            cands = self.candidates_dominated(literal_features(query_lits))
        for e in cands:
            if _subsumes_literals(e.match_lits, query_lits):
                return e
        return None

    def find_subsuming(self, clause, query_lits=None):
        """Alive entries subsuming ``clause`` as (wid, cid) pairs."""
        if query_lits is None:
            if self.ska:
                query_lits = _clause_ska_literals(clause, self.skolem_prefixes)
            else:
                query_lits = clause.literals
        if self.brute:
            cands = self.alive_entries()
        else:
            cands = self.candidates_dominated(literal_features(query_lits))
        hits = [e for e in cands if _subsumes_literals(e.match_lits, query_lits)]
        hits.sort(key=lambda e: e.serial)
        return [(e.wid, e.cid) for e in hits]
