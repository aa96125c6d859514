"""Deterministic generator for the bundled evaluation corpus.

Three problem families, all provably unsatisfiable by construction (every
conjecture is picked off a derivation ladder the generator builds):

* rel*: composition of binary relations over a constant universe.  Ground
  base tuples plus first-order composition rules; conjectures are ladder
  facts at increasing composition depth.
* horn*: group-like modular sums.  Facts sum(g, b, g+b) for a small
  generator set, a combine rule val(X) & val(Y) & sum(X,Y,Z) -> val(Z),
  conjectures along an addition chain.
* lat*: lattice-style orders without equality: covering relations of a
  divisor lattice, transitivity, meet witnesses with glb rules, for some
  instances disjunctive chain-totality noise; conjectures are ordered pairs
  at increasing chain distance.

Symbols are namespaced per subfamily so guidance and k-NN selection cluster
cleanly.  Subfamily sizes are tuned so that an unguided FIFO run inside a
10k given-clause budget solves roughly half of the corpus.
"""

from __future__ import annotations

import os
import random

_SEED = 202408


def _fact(pred, *consts):
    return "%s(%s)" % (pred, ",".join(consts))


class _SubfamilyWriter:
    def __init__(self, tag):
        self.tag = tag
        self.axioms = []  # list of literal strings

    def add(self, text):
        self.axioms.append(text)

    def problem_text(self, conjecture_atom):
        lines = []
        for i, ax in enumerate(self.axioms):
            lines.append("cnf(a%d, axiom, %s)." % (i, ax))
        lines.append("cnf(goal, negated_conjecture, ~%s)." % conjecture_atom)
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# rel family: relation composition


def _gen_rel(tag, n_const, n_rel, n_rows, out_deg, ladder_len, depths, rng):
    consts = ["%sc%d" % (tag, i) for i in range(n_const)]
    rels = ["%sr%d" % (tag, i) for i in range(n_rel)]
    w = _SubfamilyWriter(tag)

    edges = set()
    for r in range(n_rel):
        for a in range(n_const):
            for _ in range(out_deg):
                b = rng.randrange(n_const)
                edges.add((r, a, b))

    rows = set()
    while len(rows) < n_rows:
        rows.add((rng.randrange(n_rel), rng.randrange(n_rel),
                  rng.randrange(n_rel)))

    # backbone ladder: fact_i = rel_{K_i}(a0, path[i]) derived by composing
    # fact_{i-1} with a base edge; add the needed rows and edges
    path = [0]
    for _ in range(ladder_len):
        nxt = rng.randrange(n_const)
        path.append(nxt)
    ladder = []
    kcur = rng.randrange(n_rel)
    edges.add((kcur, path[0], path[1]))
    ladder.append((kcur, path[0], path[1]))
    for i in range(1, ladder_len):
        j = rng.randrange(n_rel)
        knext = rng.randrange(n_rel)
        edges.add((j, path[i], path[i + 1]))
        rows.add((kcur, j, knext))
        ladder.append((knext, path[0], path[i + 1]))
        kcur = knext

    for r, a, b in sorted(edges):
        w.add(_fact(rels[r], consts[a], consts[b]))
    for i, j, k in sorted(rows):
        w.add("~%s(X,Y) | ~%s(Y,Z) | %s(X,Z)" % (rels[i], rels[j], rels[k]))

    problems = []
    for idx, d in enumerate(depths):
        k, a, b = ladder[min(d, len(ladder)) - 1]
        atom = _fact(rels[k], consts[a], consts[b])
        problems.append(("%s_%02d" % (tag, idx), w.problem_text(atom)))
    return problems


# ---------------------------------------------------------------------------
# horn family: modular sums


def _gen_horn(tag, m, gens, start, depths, rng):
    consts = ["%sn%d" % (tag, i) for i in range(m)]
    val = "%sval" % tag
    sm = "%ssum" % tag
    w = _SubfamilyWriter(tag)

    for g in gens:
        for b in range(m):
            w.add(_fact(sm, consts[g], consts[b], consts[(g + b) % m]))
    for g in gens:
        w.add(_fact(val, consts[g]))
    w.add(_fact(val, consts[start]))
    w.add("~%s(X) | ~%s(Y) | ~%s(X,Y,Z) | %s(Z)" % (val, val, sm, val))

    ladder = [start]
    cur = start
    for i in range(max(depths)):
        cur = (cur + gens[i % len(gens)]) % m
        ladder.append(cur)

    problems = []
    for idx, d in enumerate(depths):
        atom = _fact(val, consts[ladder[d]])
        problems.append(("%s_%02d" % (tag, idx), w.problem_text(atom)))
    return problems


# ---------------------------------------------------------------------------
# lat family: divisor lattices


def _gen_lat(tag, exps, n_meets, depths, rng, totality_chain=False):
    dims = len(exps)
    elems = [()]
    for e in exps:
        elems = [v + (i,) for v in elems for i in range(e + 1)]
    elems.sort()
    index = {v: i for i, v in enumerate(elems)}
    consts = ["%sd%d" % (tag, i) for i in range(len(elems))]
    leq = "%sleq" % tag
    meet = "%smeet" % tag
    w = _SubfamilyWriter(tag)

    covers = []
    for v in elems:
        for d in range(dims):
            if v[d] < exps[d]:
                u = v[:d] + (v[d] + 1,) + v[d + 1:]
                covers.append((v, u))
    for v, u in covers:
        w.add(_fact(leq, consts[index[v]], consts[index[u]]))
    w.add("~%s(X,Y) | ~%s(Y,Z) | %s(X,Z)" % (leq, leq, leq))

    # meet witnesses for sampled pairs, plus the glb rules
    pairs = sorted(elems)
    sampled = set()
    while len(sampled) < min(n_meets, len(elems) ** 2 // 4):
        a = pairs[rng.randrange(len(pairs))]
        b = pairs[rng.randrange(len(pairs))]
        if a != b:
            sampled.add((a, b))
    for a, b in sorted(sampled):
        g = tuple(min(x, y) for x, y in zip(a, b))
        w.add(_fact(meet, consts[index[a]], consts[index[b]],
                    consts[index[g]]))
    w.add("~%s(X,Y,Z) | %s(Z,X)" % (meet, leq))
    w.add("~%s(X,Y,Z) | %s(Z,Y)" % (meet, leq))
    w.add("~%s(W,X) | ~%s(W,Y) | ~%s(X,Y,Z) | %s(W,Z)"
          % (leq, leq, meet, leq))

    # a maximal chain from bottom to top; conjectures are chain pairs
    chain = [tuple(0 for _ in exps)]
    cur = chain[0]
    while cur != tuple(exps):
        for d in range(dims):
            if cur[d] < exps[d]:
                cur = cur[:d] + (cur[d] + 1,) + cur[d + 1:]
                chain.append(cur)
                break

    if totality_chain:
        for i in range(len(chain) - 1):
            a, b = chain[i], chain[i + 1]
            w.add("%s(%s,%s) | %s(%s,%s)"
                  % (leq, consts[index[a]], consts[index[b]],
                     leq, consts[index[b]], consts[index[a]]))

    problems = []
    for idx, d in enumerate(depths):
        d = min(d, len(chain) - 1)
        atom = _fact(leq, consts[index[chain[0]]], consts[index[chain[d]]])
        problems.append(("%s_%02d" % (tag, idx), w.problem_text(atom)))
    return problems


# ---------------------------------------------------------------------------


def corpus_spec():
    """(generator, kwargs) per subfamily; sizes calibrated against FIFO."""
    return [
        (_gen_rel, dict(tag="rel1", n_const=14, n_rel=5, n_rows=7, out_deg=2,
                        ladder_len=10, depths=[2, 3, 4, 5, 6, 8, 10])),
        (_gen_rel, dict(tag="rel2", n_const=34, n_rel=8, n_rows=10, out_deg=2,
                        ladder_len=14, depths=[2, 3, 4, 6, 8, 11, 14])),
        (_gen_rel, dict(tag="rel3", n_const=22, n_rel=6, n_rows=8, out_deg=2,
                        ladder_len=12, depths=[2, 4, 6, 9, 12])),
        (_gen_horn, dict(tag="horn1", m=48, gens=[1, 5, 9], start=7,
                         depths=[2, 4, 6, 9, 12, 16])),
        (_gen_horn, dict(tag="horn2", m=140, gens=[1, 11, 29, 41], start=3,
                         depths=[2, 4, 7, 10, 14, 18, 22])),
        (_gen_horn, dict(tag="horn3", m=96, gens=[1, 7, 19], start=5,
                         depths=[3, 6, 9, 13, 17, 21, 25])),
        (_gen_lat, dict(tag="lat1", exps=(3, 2, 2), n_meets=40,
                        depths=[2, 3, 4, 5, 6, 7])),
        (_gen_lat, dict(tag="lat2", exps=(7, 5, 3), n_meets=120,
                        depths=[2, 3, 5, 7, 9, 12, 15])),
        (_gen_lat, dict(tag="lat3", exps=(4, 3, 2), n_meets=60,
                        depths=[2, 4, 6, 8, 9], totality_chain=True)),
    ]


def family_of(problem_name):
    """Generator family (rel/horn/lat) of a corpus problem name."""
    for fam in ("rel", "horn", "lat"):
        if problem_name.startswith(fam):
            return fam
    return "other"


def generate_corpus(dest_dir, seed=_SEED):
    """Write the bundled corpus; returns the sorted list of file paths.

    Generation is deterministic for a fixed seed.
    """
    os.makedirs(dest_dir, exist_ok=True)
    paths = []
    for gen, kwargs in corpus_spec():
        rng = random.Random("%s:%s:%d" % (kwargs["tag"], seed, 0))
        for name, text in gen(rng=rng, **kwargs):
            path = os.path.join(dest_dir, name + ".p")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
            paths.append(path)
    return sorted(paths)
