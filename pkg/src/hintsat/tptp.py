"""Parser and printer for the TPTP CNF subset used throughout.

Accepted input is a sequence of annotated formulas

    cnf(<name>, <role>, <clause>).

with role one of axiom / hypothesis / negated_conjecture / plain, literals
separated by ``|``, ``~`` for negation, infix ``=`` / ``!=`` for equality and
``$false`` for the empty clause.  ``%`` starts a comment running to the end
of the line.  Variables start with an uppercase letter.
"""

from __future__ import annotations

import re

from .fol import (AXIOM, DERIVED, EQ, NEGATED_CONJECTURE, Clause, Problem,
                  term_to_str)


class TptpSyntaxError(ValueError):
    def __init__(self, message, line, col):
        super().__init__("%s at line %d, column %d" % (message, line, col))
        self.line = line
        self.col = col


class ArityError(ValueError):
    def __init__(self, symbol, seen, expected):
        super().__init__("symbol '%s' used with arity %d after arity %d"
                         % (symbol, seen, expected))
        self.symbol = symbol


class DuplicateNameError(ValueError):
    def __init__(self, name):
        super().__init__("duplicate clause name '%s'" % name)
        self.name = name


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<lower>[a-z][A-Za-z0-9_]*|[0-9]+)
  | (?P<upper>[A-Z_][A-Za-z0-9_]*)
  | (?P<false>\$false)
  | (?P<neq>!=)
  | (?P<punct>[(),.|~=])
""", re.VERBOSE)

_ROLES = {"axiom", "hypothesis", "negated_conjecture", "plain"}


def _tokenize(text):
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise TptpSyntaxError("unexpected character %r" % text[pos],
                                  line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind in ("ws", "comment"):
            line += value.count("\n")
            if "\n" in value:
                line_start = m.start() + value.rindex("\n") + 1
        else:
            tokens.append((kind, value, line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(("eof", "", line, n - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise TptpSyntaxError(message, tok[2], tok[3])

    def expect(self, value):
        kind, v, line, col = self.next()
        if v != value:
            raise TptpSyntaxError("expected %r, found %r" % (value, v), line, col)

    def parse_problem(self, name):
        problem = Problem(name)
        names = set()
        while self.peek()[0] != "eof":
            cname, role, literals = self.parse_cnf_line()
            if cname in names:
                raise DuplicateNameError(cname)
            names.add(cname)
            origin = NEGATED_CONJECTURE if role == "negated_conjecture" else AXIOM
            cl = Clause(literals, cid=len(problem.clauses), origin=origin,
                        name=cname)
            self._check_arities(problem.arities, cl)
            problem.clauses.append(cl)
        if not problem.clauses:
            self.error("empty problem: no cnf formulas found")
        return problem

    def _check_arities(self, arities, cl):
        for _, atom in cl.literals:
            stack = [atom]
            while stack:
                t = stack.pop()
                if type(t) is str:
                    continue
                sym, arity = t[0], len(t) - 1
                seen = arities.get(sym)
                if seen is None:
                    arities[sym] = arity
                elif seen != arity:
                    raise ArityError(sym, arity, seen)
                if arity:
                    stack.extend(t[1:])

    def parse_cnf_line(self):
        kind, v, line, col = self.next()
        if v != "cnf":
            raise TptpSyntaxError("expected 'cnf', found %r" % v, line, col)
        self.expect("(")
        kind, cname, line, col = self.next()
        if kind not in ("lower", "upper"):
            raise TptpSyntaxError("expected clause name, found %r" % cname,
                                  line, col)
        self.expect(",")
        kind, role, line, col = self.next()
        if role not in _ROLES:
            raise TptpSyntaxError("unknown role %r" % role, line, col)
        self.expect(",")
        literals = self.parse_clause()
        self.expect(")")
        self.expect(".")
        return cname, role, literals

    def parse_clause(self):
        # optional outer parentheses around the disjunction
        if self.peek()[1] == "(":
            save = self.i
            self.next()
            try:
                literals = self._parse_disjunction()
                self.expect(")")
                return literals
            except TptpSyntaxError:
                self.i = save
        return self._parse_disjunction()

    def _parse_disjunction(self):
        if self.peek()[0] == "false":
            self.next()
            return ()
        literals = [self.parse_literal()]
        while self.peek()[1] == "|":
            self.next()
            literals.append(self.parse_literal())
        return tuple(literals)

    def parse_literal(self):
        negated = False
        if self.peek()[1] == "~":
            self.next()
            negated = True
        kind, v, line, col = self.peek()
        if kind == "upper":
            # an equation may start with a variable
            left = self.parse_term()
            return self._finish_equation(left, negated)
        if kind != "lower":
            self.error("expected atom")
        atom = self.parse_term()
        if self.peek()[1] in ("=", "!="):
            return self._finish_equation(atom, negated)
        if type(atom) is str:
            self.error("atom may not be a bare variable")
        return (not negated, atom)

    def _finish_equation(self, left, negated):
        kind, op, line, col = self.next()
        if op not in ("=", "!="):
            raise TptpSyntaxError("expected '=' or '!=', found %r" % op,
                                  line, col)
        right = self.parse_term()
        pol = (op == "=")
        if negated:
            pol = not pol
        return (pol, (EQ, left, right))

    def parse_term(self):
        kind, v, line, col = self.next()
        if kind == "upper":
            return v
        if kind != "lower":
            raise TptpSyntaxError("expected term, found %r" % v, line, col)
        if self.peek()[1] != "(":
            return (v,)
        self.next()
        args = [self.parse_term()]
        while self.peek()[1] == ",":
            self.next()
            args.append(self.parse_term())
        self.expect(")")
        return (v,) + tuple(args)


def parse_cnf(text, name="problem"):
    """Parse TPTP CNF text into a Problem.

    Raises TptpSyntaxError, ArityError or DuplicateNameError.
    """
    return _Parser(text).parse_problem(name)


def parse_clause_line(text):
    """Parse a single ``cnf(...).`` line; returns a Clause."""
    problem = parse_cnf(text, name="line")
    return problem.clauses[0]


# ---------------------------------------------------------------------------
# printing


def format_literal(literal):
    pol, atom = literal
    if atom[0] == EQ and len(atom) == 3:
        op = " = " if pol else " != "
        return term_to_str(atom[1]) + op + term_to_str(atom[2])
    return ("" if pol else "~ ") + term_to_str(atom)


_ROLE_OF_ORIGIN = {
    AXIOM: "axiom",
    NEGATED_CONJECTURE: "negated_conjecture",
    DERIVED: "plain",
}


def print_clause(c: Clause, name=None, role=None):
    """Render a clause as a ``cnf(...).`` line parse_cnf accepts back."""
    cname = name or c.name or ("c%d" % c.cid if c.cid >= 0 else "c")
    crole = role or _ROLE_OF_ORIGIN.get(c.origin, "plain")
    if not c.literals:
        body = "$false"
    else:
        body = " | ".join(format_literal(l) for l in c.literals)
    return "cnf(%s, %s, %s)." % (cname, crole, body)


def print_problem(problem: Problem):
    return "\n".join(print_clause(c) for c in problem.clauses) + "\n"


def write_clauses(path, clauses, name_prefix="w"):
    """Write clauses to a TPTP file with sequentially numbered names."""
    lines = []
    for i, c in enumerate(clauses):
        lines.append(print_clause(c, name="%s%d" % (name_prefix, i)))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
