"""Watchlist construction for a target problem.

Four methods: same-family proofs (art), high-frequency proof clauses (freq),
k-NN over conjecture features suggesting clauses (knn-st), and k-NN
suggesting whole proofs (knn-dyn), where a second mining round replaces
"which proofs look similar" by "which proofs actually guided the clauses a
proof needed".

Conjecture features are bare symbols, adjacent symbol pairs from top-down
walks over the formula trees, and subterm skeletons with all variables
collapsed to one token and skolem symbols of equal arity collapsed per
arity.  Similarity is IDF-weighted multiset overlap.
"""

from __future__ import annotations

import json
import math
import os
import re
import warnings
from collections import Counter
from dataclasses import dataclass, field

from .fol import (DEFAULT_SKOLEM_PREFIXES, Clause, is_skolem,
                  literals_to_str, term_vars)

VAR_TOKEN = "VAR"


def _skeleton(t, prefixes):
    if type(t) is str:
        return VAR_TOKEN
    sym = t[0]
    if is_skolem(sym, prefixes):
        sym = "SK%d" % (len(t) - 1)
    if len(t) == 1:
        return sym
    return sym + "(" + ",".join(_skeleton(a, prefixes) for a in t[1:]) + ")"


def extract_features(clauses, skolem_prefixes=DEFAULT_SKOLEM_PREFIXES) -> Counter:
    """FeatureBag of the given clauses (multiset of feature strings)."""
    bag = Counter()
    for c in clauses:
        literals = c.literals if hasattr(c, "literals") else c
        for _, atom in literals:
            _walk_features(atom, bag, skolem_prefixes)
    return bag


def _walk_features(atom, bag, prefixes):
    stack = [atom]
    while stack:
        t = stack.pop()
        if type(t) is str:
            bag["t:" + VAR_TOKEN] += 1
            continue
        bag["s:" + t[0]] += 1
        bag["t:" + _skeleton(t, prefixes)] += 1
        for a in t[1:]:
            child = VAR_TOKEN if type(a) is str else a[0]
            bag["w:%s>%s" % (t[0], child)] += 1
            stack.append(a)


@dataclass
class ProofCorpusEntry:
    """One solved problem: conjecture features plus its proof clauses."""

    name: str
    features: Counter
    proof_clauses: list = field(default_factory=list)
    matched_proof_names: tuple = ()


@dataclass
class KnnModel:
    entries: list
    idf: dict

    @property
    def names(self):
        return [e.name for e in self.entries]


def build_model(entries) -> KnnModel:
    """IDF weights: ln(corpus size / number of entries containing feature)."""
    n = len(entries)
    df = Counter()
    for e in entries:
        for f in e.features:
            df[f] += 1
    idf = {f: math.log(n / d) for f, d in df.items()}
    return KnnModel(entries=list(entries), idf=idf)


def similarity(model: KnnModel, query: Counter, entry: ProofCorpusEntry):
    total = 0.0
    feats = entry.features
    for f, qc in query.items():
        ec = feats.get(f)
        if ec:
            total += model.idf.get(f, 0.0) * min(qc, ec)
    return total


def knn_suggest(model: KnnModel, query: Counter, k: int):
    """Names of the k most similar entries (ties by name ascending)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scored = sorted(((-similarity(model, query, e), e.name)
                     for e in model.entries))
    return [name for _, name in scored[:k]]


def knn_suggest_round2(model: KnnModel, query: Counter, k: int):
    """Rank proofs by mined usefulness: similarity-weighted label votes.

    Each of the k nearest entries votes for the proofs that guided it
    (matched_proof_names); remaining slots fall back to plain round-1
    suggestions.  With no mined labels anywhere this degenerates to round 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not any(e.matched_proof_names for e in model.entries):
        return knn_suggest(model, query, k)
    nearest = sorted(model.entries,
                     key=lambda e: (-similarity(model, query, e), e.name))[:k]
    votes = {}
    for e in nearest:
        s = similarity(model, query, e)
        for label in e.matched_proof_names:
            votes[label] = votes.get(label, 0.0) + s
    ranked = [name for name in sorted(votes, key=lambda n: (-votes[n], n))]
    if len(ranked) < k:
        for name in knn_suggest(model, query, k):
            if name not in ranked:
                ranked.append(name)
            if len(ranked) == k:
                break
    return ranked[:k]


# ---------------------------------------------------------------------------
# corpus storage


def problem_family(name):
    """Filename prefix before the last underscore-number segment."""
    m = re.match(r"^(.*)_\d+$", name)
    return m.group(1) if m else None


def load_corpus(corpus_dir, skolem_prefixes=DEFAULT_SKOLEM_PREFIXES):
    """Read per-problem subdirectories holding problem.p / proof.p /
    provenance.json into ProofCorpusEntry records."""
    from .tptp import parse_cnf

    entries = []
    for sub in sorted(os.listdir(corpus_dir)):
        d = os.path.join(corpus_dir, sub)
        if not os.path.isdir(d):
            continue
        ppath = os.path.join(d, "problem.p")
        prpath = os.path.join(d, "proof.p")
        if not (os.path.exists(ppath) and os.path.exists(prpath)):
            continue
        with open(ppath, encoding="utf-8") as fh:
            problem = parse_cnf(fh.read(), name=sub)
        with open(prpath, encoding="utf-8") as fh:
            proof = parse_cnf(fh.read(), name=sub + "_proof")
        conj = problem.conjecture or problem.clauses
        features = extract_features(conj, skolem_prefixes)
        matched = ()
        provpath = os.path.join(d, "provenance.json")
        if os.path.exists(provpath):
            with open(provpath, encoding="utf-8") as fh:
                prov = json.load(fh)
            names = []
            for wids in prov.get("matched", {}).values():
                for wid in wids:
                    if wid not in names:
                        names.append(wid)
            matched = tuple(sorted(names))
        entries.append(ProofCorpusEntry(name=sub, features=features,
                                        proof_clauses=list(proof.clauses),
                                        matched_proof_names=matched))
    return entries


def save_corpus_entry(corpus_dir, name, problem_text, proof_record):
    """Write one solved problem into the corpus layout."""
    d = os.path.join(corpus_dir, name)
    os.makedirs(d, exist_ok=True)
    with open(os.path.join(d, "problem.p"), "w", encoding="utf-8") as fh:
        fh.write(problem_text)
    from .proofs import extract_watchlist
    extract_watchlist(proof_record, os.path.join(d, "proof.p"))
    matched = {}
    for step in proof_record.steps:
        if step.matched:
            matched[step.name] = sorted({wid for wid, _ in step.matched})
    with open(os.path.join(d, "provenance.json"), "w", encoding="utf-8") as fh:
        json.dump({"problem": name, "matched": matched}, fh, indent=1,
                  sort_keys=True)
    return d


def mine_round2(records, entries):
    """Fill matched-proof-names from proof records with match provenance.

    ``records`` maps problem name -> ProofRecord.  Only match events of
    clauses in the final proof DAG count.  Returns the updated entry list.
    """
    by_name = {e.name: e for e in entries}
    for name, record in records.items():
        e = by_name.get(name)
        if e is None:
            continue
        e.matched_proof_names = tuple(sorted(record.matched_watchlist_ids()))
    return entries


# ---------------------------------------------------------------------------
# watchlist construction


def _dedup_clauses(clauses, cap=None):
    seen = set()
    out = []
    for c in clauses:
        key = literals_to_str(c.literals)
        if key in seen:
            continue
        seen.add(key)
        out.append(c)
        if cap is not None and len(out) >= cap:
            break
    return out


def build_watchlists(method, target_name, target_features, entries, out_dir,
                     k=16, max_clauses=256, use_round2=None):
    """Write watchlist files for a target problem; returns their paths.

    The corpus entries must not include the target problem itself.  art and
    freq ignore the conjecture features; knn-st/knn-dyn use them.  knn-dyn
    uses round-2 ranking when mined labels exist (override with use_round2).
    """
    os.makedirs(out_dir, exist_ok=True)
    if method == "art":
        family = problem_family(target_name)
        members = [e for e in entries
                   if family is not None and problem_family(e.name) == family
                   and e.name != target_name]
        if not members:
            warnings.warn("no corpus entries in family of %r" % target_name)
            return []
        clauses = [c for e in members for c in e.proof_clauses]
        path = os.path.join(out_dir, "art.p")
        _write(path, clauses)
        return [path]
    if method == "freq":
        df = Counter()
        texts = {}
        for e in entries:
            for key in {literals_to_str(c.literals) for c in e.proof_clauses}:
                df[key] += 1
            for c in e.proof_clauses:
                texts.setdefault(literals_to_str(c.literals), c)
        ranked = sorted(df, key=lambda t: (-df[t], t))[:max_clauses]
        path = os.path.join(out_dir, "freq.p")
        _write(path, [texts[t] for t in ranked])
        return [path]
    model = build_model(entries)
    if method == "knn-st":
        names = knn_suggest(model, target_features, min(k, len(entries)))
        by_name = {e.name: e for e in entries}
        clauses = _dedup_clauses(
            [c for n in names for c in by_name[n].proof_clauses],
            cap=max_clauses)
        path = os.path.join(out_dir, "knn_st.p")
        _write(path, clauses)
        return [path]
    if method == "knn-dyn":
        if not entries:
            return []
        kk = min(k, len(entries))
        if use_round2 is None:
            use_round2 = any(e.matched_proof_names for e in entries)
        if use_round2:
            names = knn_suggest_round2(model, target_features, kk)
        else:
            names = knn_suggest(model, target_features, kk)
        by_name = {e.name: e for e in entries}
        paths = []
        for n in names:
            e = by_name.get(n)
            if e is None:
                continue
            path = os.path.join(out_dir, "%s.p" % n)
            _write(path, e.proof_clauses)
            paths.append(path)
        return paths
    raise ValueError("unknown selection method %r" % method)


def _write(path, clauses):
    from .tptp import write_clauses
    write_clauses(path, clauses, name_prefix="w")
