"""Proof records, extraction, and an independent inference checker.

A ProofRecord is the ancestor closure of the empty clause: a DAG of steps in
birth order, each carrying the clause, the inference rule, parent ids, and
the watchlist entries the clause matched when it was generated.

The checker re-derives every step from its parents with its own small
unification and rule enumeration code, on purpose sharing nothing with the
search's inference engine, so that a bug there cannot hide here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fol import (AXIOM, EQ, NEGATED_CONJECTURE, alpha_normalize_literals,
                  literals_to_str)


@dataclass
class ProofStep:
    cid: int
    literals: tuple
    rule: str
    parents: tuple
    matched: tuple  # ((wid, entry cid), ...) recorded at generation
    name: str = ""


@dataclass
class ProofRecord:
    problem: str
    steps: list

    @property
    def empty_step(self):
        return self.steps[-1]

    def __len__(self):
        return len(self.steps)

    def matched_watchlist_ids(self):
        """Distinct watchlist ids matched by clauses of this proof."""
        out = []
        for step in self.steps:
            for wid, _ in step.matched:
                if wid not in out:
                    out.append(wid)
        return out

    def guided_steps(self):
        return sum(1 for s in self.steps if s.matched)


def extract_proof_record(problem_name, clauses, empty_cid) -> ProofRecord:
    """Ancestor closure of the empty clause, in birth (topological) order."""
    needed = set()
    stack = [empty_cid]
    while stack:
        cid = stack.pop()
        if cid in needed:
            continue
        needed.add(cid)
        stack.extend(clauses[cid].parents)
    steps = []
    for cid in sorted(needed):
        c = clauses[cid]
        steps.append(ProofStep(cid=cid, literals=c.literals, rule=c.rule,
                               parents=c.parents, matched=c.wl_matches,
                               name=c.name or "c%d" % cid))
    assert steps[-1].cid == empty_cid
    return ProofRecord(problem=problem_name, steps=steps)


def extract_watchlist(record: ProofRecord, path):
    """Write all proof clauses (including the empty clause) as TPTP CNF."""
    from .fol import Clause
    from .tptp import write_clauses

    clauses = [Clause(s.literals, cid=i, normalized=True)
               for i, s in enumerate(record.steps)]
    write_clauses(path, clauses, name_prefix="w")
    return path


# ---------------------------------------------------------------------------
# independent step checker


class ProofCheckError(ValueError):
    pass


def _chk_vars(t, acc):
    if type(t) is str:
        acc.add(t)
    else:
        for a in t[1:]:
            _chk_vars(a, acc)


def _chk_rename(lits, tag):
    seen = set()
    for _, atom in lits:
        _chk_vars(atom, seen)
    mapping = {v: v + tag for v in seen}

    def r(t):
        if type(t) is str:
            return mapping[t]
        return (t[0],) + tuple(r(a) for a in t[1:])

    return tuple((pol, r(atom)) for pol, atom in lits)


def _chk_apply(t, sub):
    if type(t) is str:
        if t in sub:
            return _chk_apply(sub[t], sub)
        return t
    return (t[0],) + tuple(_chk_apply(a, sub) for a in t[1:])


def _chk_occurs(v, t, sub):
    t = _chk_apply(t, sub)
    if type(t) is str:
        return t == v
    return any(_chk_occurs(v, a, sub) for a in t[1:])


def _chk_unify(t1, t2, sub):
    t1 = _chk_apply(t1, sub)
    t2 = _chk_apply(t2, sub)
    if t1 == t2:
        return sub
    if type(t1) is str:
        if _chk_occurs(t1, t2, sub):
            return None
        new = dict(sub)
        new[t1] = t2
        return new
    if type(t2) is str:
        if _chk_occurs(t2, t1, sub):
            return None
        new = dict(sub)
        new[t2] = t1
        return new
    if t1[0] != t2[0] or len(t1) != len(t2):
        return None
    for a, b in zip(t1[1:], t2[1:]):
        sub = _chk_unify(a, b, sub)
        if sub is None:
            return None
    return sub


def _chk_unify_atoms(a1, a2):
    if a1[0] != a2[0] or len(a1) != len(a2):
        return None
    sub = {}
    for x, y in zip(a1[1:], a2[1:]):
        sub = _chk_unify(x, y, sub)
        if sub is None:
            return None
    return sub


def _chk_subst_lits(lits, sub):
    return tuple((pol, _chk_apply(atom, sub)) for pol, atom in lits)


def _enum_resolvents(lits1, lits2):
    a = _chk_rename(lits1, "_l")
    b = _chk_rename(lits2, "_r")
    for i, (p1, t1) in enumerate(a):
        for j, (p2, t2) in enumerate(b):
            if p1 == p2:
                continue
            sub = _chk_unify_atoms(t1, t2)
            if sub is None:
                continue
            rest = tuple(l for k, l in enumerate(a) if k != i) + \
                tuple(l for k, l in enumerate(b) if k != j)
            yield _chk_subst_lits(rest, sub)


def _enum_factors(lits):
    a = _chk_rename(lits, "_f")
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i][0] != a[j][0]:
                continue
            sub = _chk_unify_atoms(a[i][1], a[j][1])
            if sub is None:
                continue
            rest = tuple(l for k, l in enumerate(a) if k != j)
            yield _chk_subst_lits(rest, sub)


def _chk_positions(t, path=()):
    if type(t) is str:
        return
    yield path, t
    for k in range(1, len(t)):
        yield from _chk_positions(t[k], path + (k,))


def _chk_replace(t, path, new):
    if not path:
        return new
    k = path[0]
    return t[:k] + (_chk_replace(t[k], path[1:], new),) + t[k + 1:]


def _enum_paramodulants(lits_from, lits_into):
    a = _chk_rename(lits_from, "_e")
    b = _chk_rename(lits_into, "_i")
    for i, (pol, atom) in enumerate(a):
        if not pol or atom[0] != EQ or len(atom) != 3:
            continue
        for lhs, rhs in ((atom[1], atom[2]), (atom[2], atom[1])):
            for j, (tpol, tatom) in enumerate(b):
                for k in range(1, len(tatom)):
                    for path, sub_t in _chk_positions(tatom[k]):
                        sub = _chk_unify(lhs, sub_t, {})
                        if sub is None:
                            continue
                        new_arg = _chk_replace(tatom[k], path, rhs)
                        new_atom = tatom[:k] + (new_arg,) + tatom[k + 1:]
                        rest = tuple(l for m, l in enumerate(a) if m != i) + \
                            tuple(l for m, l in enumerate(b) if m != j) + \
                            ((tpol, new_atom),)
                        yield _chk_subst_lits(rest, sub)


def _enum_equality_resolvents(lits):
    a = _chk_rename(lits, "_q")
    for i, (pol, atom) in enumerate(a):
        if pol or atom[0] != EQ or len(atom) != 3:
            continue
        sub = _chk_unify(atom[1], atom[2], {})
        if sub is None:
            continue
        rest = tuple(l for k, l in enumerate(a) if k != i)
        yield _chk_subst_lits(rest, sub)


def check_proof(record: ProofRecord, problem) -> None:
    """Verify every step of a proof record; raises ProofCheckError.

    Input steps must match an input clause of the problem up to renaming;
    derived steps must equal one of the conclusions their rule licenses from
    their parents.  Exactly one empty clause is allowed, in final position.
    """
    inputs = {}
    for c in problem.clauses:
        inputs.setdefault(literals_to_str(c.literals), c.origin)
    table = {}
    if not record.steps:
        raise ProofCheckError("empty proof record")
    for pos, step in enumerate(record.steps):
        want = alpha_normalize_literals(step.literals)
        if step.literals == () and pos != len(record.steps) - 1:
            raise ProofCheckError("empty clause before final step")
        for p in step.parents:
            if p not in table:
                raise ProofCheckError(
                    "step %d: parent %d not among earlier steps" % (step.cid, p))
            if p >= step.cid:
                raise ProofCheckError(
                    "step %d: parent %d does not precede it" % (step.cid, p))
        if step.rule == "input":
            if step.parents:
                raise ProofCheckError("input step %d has parents" % step.cid)
            if literals_to_str(want) not in inputs:
                raise ProofCheckError(
                    "step %d: not an input clause: %s"
                    % (step.cid, literals_to_str(want)))
        elif step.rule == "resolution":
            if len(step.parents) != 2:
                raise ProofCheckError("resolution step %d needs 2 parents" % step.cid)
            l1, l2 = table[step.parents[0]], table[step.parents[1]]
            if not _matches_any(want, _enum_resolvents(l1, l2)):
                raise ProofCheckError("step %d: not a resolvent of its parents"
                                      % step.cid)
        elif step.rule == "factoring":
            if len(step.parents) != 1:
                raise ProofCheckError("factoring step %d needs 1 parent" % step.cid)
            if not _matches_any(want, _enum_factors(table[step.parents[0]])):
                raise ProofCheckError("step %d: not a factor of its parent"
                                      % step.cid)
        elif step.rule == "paramodulation":
            if len(step.parents) != 2:
                raise ProofCheckError("paramodulation step %d needs 2 parents"
                                      % step.cid)
            l1, l2 = table[step.parents[0]], table[step.parents[1]]
            found = _matches_any(want, _enum_paramodulants(l1, l2)) or \
                _matches_any(want, _enum_paramodulants(l2, l1))
            if not found:
                raise ProofCheckError("step %d: not a paramodulant of its parents"
                                      % step.cid)
        elif step.rule == "equality_resolution":
            if len(step.parents) != 1:
                raise ProofCheckError("equality resolution step %d needs 1 parent"
                                      % step.cid)
            if not _matches_any(want,
                                _enum_equality_resolvents(table[step.parents[0]])):
                raise ProofCheckError(
                    "step %d: not an equality resolvent of its parent" % step.cid)
        else:
            raise ProofCheckError("step %d: unknown rule %r" % (step.cid, step.rule))
        table[step.cid] = step.literals
    if record.steps[-1].literals != ():
        raise ProofCheckError("final step is not the empty clause")


def _matches_any(want, candidates):
    for lits in candidates:
        if alpha_normalize_literals(lits) == want:
            return True
    return False
