"""Clause evaluation strategies: weighted CEFs with priority functions.

A strategy is an ordered list of clause evaluation functions (CEFs), each a
weight function paired with a priority function and a frequency weight; the
saturation loop consults the CEFs in weighted round-robin order.  The text
grammar follows the usual prover style:

    [flags] -H(2*Clauseweight(ConstPrio,20,9999,4),4*FIFOWeight(PreferWatchlist))

with optional flags --uwl, --no-remove, --ska, --paramod, --mode=...,
--delta=, --alpha=, --beta=.  -tKBO style term-order tokens and the DeferSoS
priority are accepted and ignored with a warning; term orderings play no
role in this calculus.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace

from .watchlist import (DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_DELTA,
                        MODE_DYN, MODE_DYNDEC, MODE_STATIC)


class StrategyWarning(UserWarning):
    pass


class StrategySyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__("%s at position %d" % (message, pos))
        self.pos = pos


PRIORITY_FUNCTIONS = (
    "ConstPrio",
    "PreferWatchlist",
    "DeferWatchlist",
    "PreferWatchlistRelevant",
    "DeferWatchlistRelevant",
)

WEIGHT_FUNCTIONS = ("Clauseweight", "FIFOWeight")

MODES = (MODE_STATIC, MODE_DYN, MODE_DYNDEC)


@dataclass(frozen=True)
class CEF:
    """One clause evaluation function: frequency * WeightFn(PriorityFn, args)."""

    freq: int
    weight_fn: str
    priority_fn: str
    # Clauseweight parameters (fweight, vweight, pos_multiplier); () for FIFO
    params: tuple = ()

    def render(self):
        inner = ",".join((self.priority_fn,) + tuple(str(p) for p in self.params))
        return "%d*%s(%s)" % (self.freq, self.weight_fn, inner)


@dataclass(frozen=True)
class Strategy:
    cefs: tuple
    uwl: bool = False
    no_remove: bool = False
    ska: bool = False
    paramod: bool = False
    mode: str = MODE_STATIC
    delta: float = DEFAULT_DELTA
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    name: str = ""

    def render(self):
        flags = []
        if self.uwl:
            flags.append("--uwl")
        if self.no_remove:
            flags.append("--no-remove")
        if self.ska:
            flags.append("--ska")
        if self.paramod:
            flags.append("--paramod")
        if self.mode != MODE_STATIC:
            flags.append("--mode=%s" % self.mode)
        body = "-H(" + ",".join(c.render() for c in self.cefs) + ")"
        return " ".join(flags + [body])


_FLAG_RE = re.compile(r"--(uwl|no-remove|ska|paramod)\b"
                      r"|--(mode|delta|alpha|beta)=([^\s]+)"
                      r"|-t([A-Za-z0-9_]+)")


def parse_strategy(text, name=""):
    """Parse a strategy specification string.

    Unknown weight/priority function names are rejected; DeferSoS and -t
    ordering tokens are tolerated with a warning.
    """
    flags = {"uwl": False, "no_remove": False, "ska": False, "paramod": False}
    mode = MODE_STATIC
    delta, alpha, beta = DEFAULT_DELTA, DEFAULT_ALPHA, DEFAULT_BETA
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        if text.startswith("-H(", pos):
            break
        m = _FLAG_RE.match(text, pos)
        if m is None:
            raise StrategySyntaxError("unrecognized token %r" % text[pos:pos + 12],
                                      pos)
        if m.group(1):
            flags[m.group(1).replace("-", "_")] = True
        elif m.group(2):
            key, val = m.group(2), m.group(3)
            if key == "mode":
                if val not in MODES:
                    raise StrategySyntaxError("unknown mode %r" % val, pos)
                mode = val
            else:
                try:
                    fval = float(val)
                except ValueError:
                    raise StrategySyntaxError("bad numeric value %r" % val, pos)
                if key == "delta":
                    delta = fval
                elif key == "alpha":
                    alpha = fval
                else:
                    beta = fval
        else:
            warnings.warn("ignoring term-order token -t%s" % m.group(4),
                          StrategyWarning, stacklevel=2)
        pos = m.end()
    if not text.startswith("-H(", pos):
        raise StrategySyntaxError("expected -H(...)", pos)
    pos += 3
    cefs = []
    while True:
        cef, pos = _parse_cef(text, pos)
        cefs.append(cef)
        if pos >= n:
            raise StrategySyntaxError("unterminated -H(...)", pos)
        if text[pos] == ",":
            pos += 1
            continue
        if text[pos] == ")":
            pos += 1
            break
        raise StrategySyntaxError("expected ',' or ')'", pos)
    if text[pos:].strip():
        raise StrategySyntaxError("trailing input after -H(...)", pos)
    if delta >= 1:
        raise StrategySyntaxError("--delta must be < 1", 0)
    if alpha < 0 or beta < 0:
        raise StrategySyntaxError("--alpha/--beta must be >= 0", 0)
    return Strategy(cefs=tuple(cefs), mode=mode, delta=delta, alpha=alpha,
                    beta=beta, name=name, **flags)


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT_RE = re.compile(r"-?\d+")


def _parse_cef(text, pos):
    m = _INT_RE.match(text, pos)
    if m is None:
        raise StrategySyntaxError("expected frequency weight", pos)
    freq = int(m.group())
    if freq < 1:
        raise StrategySyntaxError("frequency weight must be >= 1", pos)
    pos = m.end()
    if pos >= len(text) or text[pos] != "*":
        raise StrategySyntaxError("expected '*'", pos)
    pos += 1
    m = _NAME_RE.match(text, pos)
    if m is None:
        raise StrategySyntaxError("expected weight function name", pos)
    wf = m.group()
    if wf not in WEIGHT_FUNCTIONS:
        raise StrategySyntaxError("unknown weight function %r" % wf, pos)
    pos = m.end()
    if pos >= len(text) or text[pos] != "(":
        raise StrategySyntaxError("expected '('", pos)
    pos += 1
    m = _NAME_RE.match(text, pos)
    if m is None:
        raise StrategySyntaxError("expected priority function name", pos)
    pf = m.group()
    if pf == "DeferSoS":
        warnings.warn("DeferSoS has no meaning here; using ConstPrio",
                      StrategyWarning, stacklevel=3)
        pf = "ConstPrio"
    if pf not in PRIORITY_FUNCTIONS:
        raise StrategySyntaxError("unknown priority function %r" % pf, pos)
    pos = m.end()
    params = []
    while pos < len(text) and text[pos] == ",":
        pos += 1
        m = _INT_RE.match(text, pos)
        if m is None:
            raise StrategySyntaxError("expected integer parameter", pos)
        params.append(int(m.group()))
        pos = m.end()
    if pos >= len(text) or text[pos] != ")":
        raise StrategySyntaxError("expected ')'", pos)
    pos += 1
    if wf == "Clauseweight":
        if len(params) != 3:
            raise StrategySyntaxError(
                "Clauseweight takes (priority, fweight, vweight, pos_mult)", pos)
    elif params:
        raise StrategySyntaxError("FIFOWeight takes only a priority function", pos)
    return CEF(freq=freq, weight_fn=wf, priority_fn=pf, params=tuple(params)), pos


# ---------------------------------------------------------------------------
# built-in strategies and mode application


def _cefs_with_priority(strategy, pf):
    return tuple(replace(c, priority_fn=pf) for c in strategy.cefs)


def apply_mode(base: Strategy, mode: str) -> Strategy:
    """Derive a guided/unguided variant of a base strategy.

    pref/const/dyn substitute every CEF's priority function; uwl keeps the
    base priorities but always prefers watchlist matchers; ska is pref plus
    widened skolem matching; dyndec adds relevance inheritance to dyn; evo is
    the fixed built-in combination.
    """
    if mode == "pref":
        return replace(base, cefs=_cefs_with_priority(base, "PreferWatchlist"),
                       name=_mode_name(base, mode))
    if mode == "const":
        return replace(base, cefs=_cefs_with_priority(base, "ConstPrio"),
                       name=_mode_name(base, mode))
    if mode == "uwl":
        return replace(base, uwl=True, name=_mode_name(base, mode))
    if mode == "ska":
        return replace(base, cefs=_cefs_with_priority(base, "PreferWatchlist"),
                       ska=True, name=_mode_name(base, mode))
    if mode == "dyn":
        return replace(base,
                       cefs=_cefs_with_priority(base, "PreferWatchlistRelevant"),
                       mode=MODE_DYN, name=_mode_name(base, mode))
    if mode == "dyndec":
        return replace(base,
                       cefs=_cefs_with_priority(base, "PreferWatchlistRelevant"),
                       mode=MODE_DYNDEC, name=_mode_name(base, mode))
    if mode == "evo":
        return replace(EVO, paramod=base.paramod, no_remove=base.no_remove,
                       name=_mode_name(base, mode))
    raise ValueError("unknown mode %r" % mode)


def _mode_name(base, mode):
    return "%s_%s" % (mode, base.name) if base.name else mode


def _mk(spec, name):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StrategyWarning)
        return replace(parse_strategy(spec), name=name)


# Unguided defaults.  FIFO is the completeness baseline; BASELINE mirrors the
# usual two-queue symbol-counting/FIFO mix.
FIFO = _mk("-H(1*FIFOWeight(ConstPrio))", "fifo")
BASELINE = _mk("-H(2*Clauseweight(ConstPrio,20,9999,4),4*FIFOWeight(ConstPrio))",
               "baseline")

# Watchlist built-ins: a pure watchlist heuristic, the 10-of-11 interleave
# (ten watchlist picks, the eleventh FIFO), the fixed 4-CEF stand-in for the
# genetically evolved heuristic (watchlist-preferring in two of its four
# sub-evaluations), and the baseline with all priorities flipped to
# PreferWatchlist.
PURE_WATCHLIST = _mk("-H(1*Clauseweight(PreferWatchlist,1,1,1))", "pure-watchlist")
INTERLEAVE_10_11 = _mk(
    "-H(10*Clauseweight(PreferWatchlist,1,1,1),1*FIFOWeight(ConstPrio))",
    "interleave-10-11")
EVO = _mk("-H(8*Clauseweight(PreferWatchlist,1,1,1),"
          "8*Clauseweight(PreferWatchlist,2,1,1),"
          "1*FIFOWeight(ConstPrio),"
          "1*Clauseweight(ConstPrio,3,1,1))", "evo")
PREF_BASELINE = apply_mode(BASELINE, "pref")

BUILTIN_STRATEGIES = {
    "fifo": FIFO,
    "baseline": BASELINE,
    "evo": EVO,
    "pure-watchlist": PURE_WATCHLIST,
    "interleave-10-11": INTERLEAVE_10_11,
    "pref-baseline": PREF_BASELINE,
}


def get_strategy(spec_or_name: str) -> Strategy:
    """Resolve a builtin name or parse a strategy specification."""
    if spec_or_name in BUILTIN_STRATEGIES:
        return BUILTIN_STRATEGIES[spec_or_name]
    return replace(parse_strategy(spec_or_name), name=spec_or_name)
