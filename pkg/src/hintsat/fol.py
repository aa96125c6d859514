"""First-order terms, literals and clauses for the CNF fragment.

The term encoding is deliberately lightweight:

* a variable is a bare string starting with an uppercase letter (TPTP
  convention), e.g. ``"X"``;
* an application is a tuple ``(symbol, arg, ...)``; a constant is the
  1-tuple ``("a",)``.

A literal is a pair ``(polarity, atom)`` where ``atom`` is an application
(possibly of the distinguished equality symbol ``"="``).  Nested tuples give
us structural equality, hashing and cheap copies for free, which matters:
clauses are created by the hundred thousand during saturation.

Clauses are stored in a canonical alpha-normalized form (variables renamed
to X0, X1, ... under a deterministic literal order), so that alpha-variant
clauses compare equal literal-for-literal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

EQ = "="

DEFAULT_SKOLEM_PREFIXES = ("sk",)

# Origins of clauses inside a Problem / search state.
AXIOM = "axiom"
NEGATED_CONJECTURE = "negated_conjecture"
DERIVED = "derived"

# Cap on tie-breaking permutations explored while canonicalizing a clause.
# Symmetric clauses needing more than this are astronomically rare here.
_MAX_CANON_PERMS = 2000


def is_var(t):
    return type(t) is str


def term_size(t):
    """Number of nodes (symbol and variable occurrences) in a term tree."""
    if type(t) is str:
        return 1
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        n += 1
        if type(x) is not str and len(x) > 1:
            stack.extend(x[1:])
    return n


def term_depth(t):
    if type(t) is str or len(t) == 1:
        return 1
    return 1 + max(term_depth(a) for a in t[1:])


def term_vars(t, acc=None):
    """Variables of a term in first-occurrence order."""
    if acc is None:
        acc = []
    if type(t) is str:
        if t not in acc:
            acc.append(t)
    else:
        for a in t[1:]:
            term_vars(a, acc)
    return acc


def term_to_str(t):
    if type(t) is str:
        return t
    if len(t) == 1:
        return t[0]
    return t[0] + "(" + ",".join(term_to_str(a) for a in t[1:]) + ")"


def subst_term(t, sub):
    """Apply a fully-resolved substitution (var -> closed binding) to a term."""
    if type(t) is str:
        return sub.get(t, t)
    if len(t) == 1:
        return t
    return (t[0],) + tuple(subst_term(a, sub) for a in t[1:])


def deep_subst(t, sub):
    """Apply a triangular substitution, chasing variable chains."""
    while type(t) is str:
        b = sub.get(t)
        if b is None:
            return t
        t = b
    if len(t) == 1:
        return t
    return (t[0],) + tuple(deep_subst(a, sub) for a in t[1:])


def _occurs(v, t, sub):
    stack = [t]
    while stack:
        x = stack.pop()
        while type(x) is str:
            if x == v:
                return True
            b = sub.get(x)
            if b is None:
                break
            x = b
        if type(x) is not str and len(x) > 1:
            stack.extend(x[1:])
    return False


def unify(t1, t2, sub=None):
    """Most general unifier of two terms, or None.

    Returns a triangular substitution dict; use deep_subst to apply it.
    """
    if sub is None:
        sub = {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        while type(a) is str and a in sub:
            a = sub[a]
        while type(b) is str and b in sub:
            b = sub[b]
        if a == b:
            continue
        if type(a) is str:
            if _occurs(a, b, sub):
                return None
            sub[a] = b
        elif type(b) is str:
            if _occurs(b, a, sub):
                return None
            sub[b] = a
        else:
            if a[0] != b[0] or len(a) != len(b):
                return None
            stack.extend(zip(a[1:], b[1:]))
    return sub


def unify_atoms(a1, a2, sub=None):
    if a1[0] != a2[0] or len(a1) != len(a2):
        return None
    if sub is None:
        sub = {}
    for x, y in zip(a1[1:], a2[1:]):
        sub = unify(x, y, sub)
        if sub is None:
            return None
    return sub


def rename_term(t, mapping):
    if type(t) is str:
        return mapping.get(t, t)
    if len(t) == 1:
        return t
    return (t[0],) + tuple(rename_term(a, mapping) for a in t[1:])


def rename_literals(literals, suffix):
    """Rename every variable by appending a suffix (standardize apart)."""
    mapping = {}
    out = []
    for pol, atom in literals:
        for v in term_vars(atom):
            if v not in mapping:
                mapping[v] = v + suffix
        out.append((pol, rename_term(atom, mapping)))
    return tuple(out)


def is_skolem(symbol, prefixes=DEFAULT_SKOLEM_PREFIXES):
    return symbol.startswith(tuple(prefixes))


# ---------------------------------------------------------------------------
# canonical clause form


# Variable marker in skeleton keys; sorts before any parseable symbol and
# keeps tuple comparisons homogeneous (vars never meet ints at compare time
# unless both sides are vars).
_VARMARK = "\x00"


def _skeleton_term(t, names):
    if type(t) is str:
        got = names.get(t)
        if got is None:
            got = len(names)
            names[t] = got
        return (_VARMARK, got)
    if len(t) == 1:
        return t
    return (t[0],) + tuple(_skeleton_term(a, names) for a in t[1:])


def _literal_local_key(lit):
    """Renaming-invariant sort key: (polarity, predicate, skeleton).

    Variables are numbered by first occurrence within the literal.  Ground
    atoms are their own skeleton, making the common case allocation-free.
    """
    pol, atom = lit
    names = {}
    sk = _skeleton_term(atom, names)
    return (pol, atom[0], sk), bool(names)


def _sequence_key(literals):
    """Skeleton of a whole literal sequence under shared variable numbering."""
    names = {}
    return tuple((pol, _skeleton_term(atom, names)) for pol, atom in literals)


def _rename_sequence(literals):
    """Rename variables to X0, X1, ... by first occurrence over a sequence."""
    mapping = {}
    out = []
    for pol, atom in literals:
        for v in term_vars(atom):
            if v not in mapping:
                mapping[v] = "X%d" % len(mapping)
        out.append((pol, rename_term(atom, mapping)))
    return tuple(out)


def literals_to_str(literals):
    if not literals:
        return "$false"
    parts = []
    for pol, atom in literals:
        if atom[0] == EQ and len(atom) == 3:
            op = "=" if pol else "!="
            parts.append(term_to_str(atom[1]) + op + term_to_str(atom[2]))
        else:
            parts.append(("" if pol else "~") + term_to_str(atom))
    return "|".join(parts)


def alpha_normalize_literals(literals):
    """Canonical form of a literal multiset.

    Clauses equal up to variable renaming and literal reordering map to the
    same tuple.  Literals sort by a renaming-invariant skeleton key; groups
    of key-tied variable-bearing literals are broken by trying their
    orderings and keeping the least whole-clause skeleton (bounded by
    _MAX_CANON_PERMS, beyond which the incoming order stands).
    """
    if not literals:
        return ()
    lits = literals if type(literals) is tuple else tuple(literals)
    keys = []
    any_vars = False
    for l in lits:
        k, has = _literal_local_key(l)
        keys.append(k)
        any_vars |= has
    order = sorted(range(len(lits)), key=keys.__getitem__)
    ordered = [lits[i] for i in order]
    if not any_vars:
        return tuple(ordered)

    # group positions with equal keys; only var-bearing tie groups matter
    okeys = [keys[i] for i in order]
    tied = []
    start = 0
    for i in range(1, len(ordered) + 1):
        if i == len(ordered) or okeys[i] != okeys[start]:
            if i - start > 1 and okeys[start][2] is not ordered[start][1]:
                # skeleton differs from the atom itself => literal has vars
                tied.append((start, i))
            start = i
    if not tied:
        return _rename_sequence(ordered)

    nperms = 1
    for a, b in tied:
        for j in range(2, b - a + 1):
            nperms *= j
        if nperms > _MAX_CANON_PERMS:
            return _rename_sequence(ordered)

    best = None
    best_arrangement = None
    choices = [list(itertools.permutations(range(a, b))) for a, b in tied]
    for combo in itertools.product(*choices):
        arrangement = list(ordered)
        for (a, b), perm in zip(tied, combo):
            arrangement[a:b] = [ordered[j] for j in perm]
        key = _sequence_key(arrangement)
        if best is None or key < best:
            best = key
            best_arrangement = arrangement
    return _rename_sequence(best_arrangement)


def literal_counts(literals):
    """Per-literal (positive, non-variable occs, variable occs) triples."""
    out = []
    for pol, atom in literals:
        nonvar = 0
        nvar = 0
        stack = [atom]
        while stack:
            t = stack.pop()
            if type(t) is str:
                nvar += 1
            else:
                nonvar += 1
                if len(t) > 1:
                    stack.extend(t[1:])
        out.append((pol, nonvar, nvar))
    return tuple(out)


class Clause:
    """A clause: multiset of literals plus derivation metadata.

    Literals are held in canonical alpha-normalized order.  Watchlist
    relevance fields are filled in at generation time by the search and are
    never updated afterwards.
    """

    __slots__ = (
        "literals", "cid", "name", "origin", "parents", "rule",
        "length", "is_ground", "lit_counts",
        "relevance0", "relevance1", "relevance2", "wl_matched", "wl_matches",
        "_features", "_ska_literals", "_renamed",
    )

    def __init__(self, literals, cid=-1, origin=DERIVED, parents=(),
                 rule="input", name=None, normalized=False):
        lits = tuple(literals) if normalized else alpha_normalize_literals(tuple(literals))
        self.literals = lits
        self.cid = cid
        self.name = name
        self.origin = origin
        self.parents = tuple(parents)
        self.rule = rule
        self.lit_counts = literal_counts(lits)
        self.length = sum(nv + nva for _, nv, nva in self.lit_counts)
        self.is_ground = all(nva == 0 for _, _, nva in self.lit_counts)
        self.relevance0 = 0.0
        self.relevance1 = 0.0
        self.relevance2 = 0.0
        self.wl_matched = False
        self.wl_matches = ()
        self._features = None
        self._ska_literals = None
        self._renamed = None

    def renamed_apart(self):
        """Literals with every variable suffixed, for use as the second
        premise of a binary inference (cached; clauses are immutable)."""
        if self._renamed is None:
            self._renamed = (self.literals if self.is_ground
                             else rename_literals(self.literals, "_p"))
        return self._renamed

    @property
    def is_empty(self):
        return not self.literals

    def key(self):
        """Canonical text; equal iff clauses are alpha-variants."""
        return literals_to_str(self.literals)

    def __repr__(self):
        return "Clause(%s, cid=%d)" % (literals_to_str(self.literals), self.cid)


def clause(*literals, **kw):
    """Convenience constructor used in tests and demos."""
    return Clause(literals, **kw)


def lit(pol, sym, *args):
    return (pol, (sym,) + tuple(args))


@dataclass
class Problem:
    """A named CNF problem: axioms plus (usually) a negated conjecture."""

    name: str
    clauses: list = field(default_factory=list)
    arities: dict = field(default_factory=dict)

    @property
    def conjecture(self):
        return [c for c in self.clauses if c.origin == NEGATED_CONJECTURE]


def alpha_normalize(c: Clause) -> Clause:
    """Return a clause whose literals are in canonical form.

    Clause construction already normalizes, so this is mostly useful for
    re-normalizing hand-built literal tuples.
    """
    return Clause(c.literals, cid=c.cid, origin=c.origin, parents=c.parents,
                  rule=c.rule, name=c.name)
