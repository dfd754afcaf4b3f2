"""Lattice terms with complement and Sasaki operations.

Concrete syntax::

    x v y      join              x ^ y      meet
    x'         complement        0, 1       bounds
    x o y      Sasaki product    x -> y     Sasaki residual
    p(x,y,z)   built-in term (see ``REGISTRY``)

Complement binds tightest, then ``o``/``->`` (non-associative), then ``^``,
then ``v``.  Identities are written ``lhs = rhs`` and Horn quasi-identities
``s1 <= t1 & s2 <= t2 => lhs = rhs`` (or ``=> lhs <= rhs``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class ParseError(ValueError):
    def __init__(self, message, pos, text=""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class UnboundVariable(KeyError):
    pass


class UnknownTerm(ValueError):
    pass


# syntax tree


class Term:
    __slots__ = ()

    def variables(self):
        out = set()
        _collect_vars(self, out)
        return sorted(out)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    value: int  # 0 or 1


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Comp(Term):
    arg: Term


@dataclass(frozen=True)
class SasakiProd(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class SasakiRes(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Apply(Term):
    name: str
    args: tuple


def _collect_vars(t, out):
    if isinstance(t, Var):
        out.add(t.name)
    elif isinstance(t, Comp):
        _collect_vars(t.arg, out)
    elif isinstance(t, Apply):
        for a in t.args:
            _collect_vars(a, out)
    elif isinstance(t, Const):
        pass
    else:
        _collect_vars(t.left, out)
        _collect_vars(t.right, out)


def substitute(t, env):
    if isinstance(t, Var):
        return env.get(t.name, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, Comp):
        return Comp(substitute(t.arg, env))
    if isinstance(t, Apply):
        return Apply(t.name, tuple(substitute(a, env) for a in t.args))
    return type(t)(substitute(t.left, env), substitute(t.right, env))


def expand(t):
    """Rewrite Sasaki operations and built-in applications into v, ^, '."""
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, Comp):
        return Comp(expand(t.arg))
    if isinstance(t, Apply):
        return expand(REGISTRY[t.name].instantiate(t.args))
    a, b = expand(t.left), expand(t.right)
    if isinstance(t, SasakiProd):
        return Meet(Join(a, Comp(b)), b)
    if isinstance(t, SasakiRes):
        return Join(Comp(a), Meet(a, b))
    return type(t)(a, b)


def is_sugar_free(t):
    if isinstance(t, (Var, Const)):
        return True
    if isinstance(t, (SasakiProd, SasakiRes, Apply)):
        return False
    if isinstance(t, Comp):
        return is_sugar_free(t.arg)
    return is_sugar_free(t.left) and is_sugar_free(t.right)


# printing

_PREC = {Join: 1, Meet: 2, SasakiProd: 3, SasakiRes: 3}


def to_text(t):
    """Print ``t`` so that ``parse_term(to_text(t)) == t``."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Apply):
        return f"{t.name}({', '.join(to_text(a) for a in t.args)})"
    if isinstance(t, Comp):
        inner = to_text(t.arg)
        if not isinstance(t.arg, (Var, Const, Apply, Comp)):
            inner = f"({inner})"
        return inner + "'"
    p = _PREC[type(t)]
    op = {Join: "v", Meet: "^", SasakiProd: "o", SasakiRes: "->"}[type(t)]
    left, right = to_text(t.left), to_text(t.right)
    # v and ^ are parsed left-associatively; o and -> do not chain at all
    lp = _PREC.get(type(t.left), 9)
    rp = _PREC.get(type(t.right), 9)
    if lp < p or (p == 3 and lp == 3):
        left = f"({left})"
    if rp <= p:
        right = f"({right})"
    return f"{left} {op} {right}"


# parsing

_TOKEN = re.compile(r"\s*(?:(->|<=|=>|[()',=&^01])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[stripped]!r}", stripped, text)
        start = m.start(1) if m.group(1) else m.start(2)
        tok = m.group(1) or m.group(2)
        toks.append((tok, start))
        pos = m.end()
    toks.append(("<end>", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i][0]

    @property
    def pos(self):
        return self.toks[self.i][1]

    def fail(self, expected):
        where = "end of input" if self.tok == "<end>" else repr(self.tok)
        raise ParseError(f"expected {expected}, found {where}", self.pos, self.text)

    def eat(self, tok):
        if self.tok != tok:
            self.fail(repr(tok))
        self.i += 1

    def term(self):
        t = self.meet()
        while self.tok == "v":
            self.i += 1
            t = Join(t, self.meet())
        return t

    def meet(self):
        t = self.sasaki()
        while self.tok == "^":
            self.i += 1
            t = Meet(t, self.sasaki())
        return t

    def sasaki(self):
        t = self.postfix()
        if self.tok in ("o", "->"):
            node = SasakiProd if self.tok == "o" else SasakiRes
            self.i += 1
            t = node(t, self.postfix())
            if self.tok in ("o", "->"):
                raise ParseError("'o' and '->' do not chain; add parentheses",
                                 self.pos, self.text)
        return t

    def postfix(self):
        t = self.atom()
        while self.tok == "'":
            self.i += 1
            t = Comp(t)
        return t

    def atom(self):
        tok = self.tok
        if tok == "(":
            self.i += 1
            t = self.term()
            self.eat(")")
            return t
        if tok in ("0", "1"):
            self.i += 1
            return Const(int(tok))
        if tok[0].isalpha() or tok[0] == "_":
            if tok in ("v", "o"):
                self.fail("a term")
            self.i += 1
            if self.tok == "(":
                return self.application(tok)
            return Var(tok)
        self.fail("a term")

    def application(self, name):
        start = self.toks[self.i - 1][1]
        self.eat("(")
        args = [self.term()]
        while self.tok == ",":
            self.i += 1
            args.append(self.term())
        self.eat(")")
        if name not in REGISTRY:
            raise ParseError(f"unknown term {name!r}", start, self.text)
        if len(args) != REGISTRY[name].arity:
            raise ParseError(f"{name} takes {REGISTRY[name].arity} arguments, got {len(args)}",
                             start, self.text)
        return Apply(name, tuple(args))

    def inequality(self):
        lhs = self.term()
        if self.tok not in ("<=", "="):
            self.fail("'<=' or '='")
        rel = self.tok
        self.i += 1
        return Relation(lhs, rel, self.term())

    def end(self):
        if self.tok != "<end>":
            self.fail("end of input")


def parse_term(text):
    p = _Parser(text)
    t = p.term()
    p.end()
    return t


# identities


@dataclass(frozen=True)
class Relation:
    lhs: Term
    rel: str  # "=" or "<="
    rhs: Term

    def __str__(self):
        return f"{to_text(self.lhs)} {self.rel} {to_text(self.rhs)}"


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def variables(self):
        return sorted(set(self.lhs.variables()) | set(self.rhs.variables()))

    def __str__(self):
        return f"{to_text(self.lhs)} = {to_text(self.rhs)}"


@dataclass(frozen=True)
class QuasiIdentity:
    premises: tuple  # of Relation
    conclusion: Relation

    def variables(self):
        vs = set()
        for r in (*self.premises, self.conclusion):
            vs |= set(r.lhs.variables()) | set(r.rhs.variables())
        return sorted(vs)

    def __str__(self):
        if not self.premises:
            return str(self.conclusion)
        return " & ".join(map(str, self.premises)) + " => " + str(self.conclusion)


def parse_identity(text):
    p = _Parser(text)
    lhs = p.term()
    p.eat("=")
    rhs = p.term()
    p.end()
    return Identity(lhs, rhs)


def parse_statement(text):
    """Parse one line of an identities file into an Identity or QuasiIdentity."""
    p = _Parser(text)
    first = p.inequality()
    premises = [first]
    while p.tok == "&":
        p.i += 1
        premises.append(p.inequality())
    if p.tok == "=>":
        p.i += 1
        concl = p.inequality()
        p.end()
        return QuasiIdentity(tuple(premises), concl)
    p.end()
    if len(premises) > 1:
        p.fail("'=>'")
    if first.rel == "=":
        return Identity(first.lhs, first.rhs)
    return QuasiIdentity((), first)


def parse_quasi(text):
    q = parse_statement(text)
    if isinstance(q, Identity):
        return QuasiIdentity((), Relation(q.lhs, "=", q.rhs))
    return q


# built-in terms


@dataclass(frozen=True)
class Builtin:
    name: str
    params: tuple
    source: str
    doc: str = ""

    @property
    def arity(self):
        return len(self.params)

    @cached_property
    def body(self):
        return parse_term(self.source)

    def instantiate(self, args):
        return substitute(self.body, dict(zip(self.params, args)))


REGISTRY = {}


def _register(name, params, source, doc=""):
    REGISTRY[name] = Builtin(name, tuple(params), source, doc)


_register("odot", "xy", "(x v y') ^ y", "Sasaki product")
_register("arrow", "xy", "x' v (x ^ y)", "Sasaki residual")
_register("t1", "xy", "(x ^ y) v (x v y)'", "binary term whose value is 1 iff the pair is collapsed")
_register("u", "xy", "(x ^ y) v (x v y)'", "the term u used by the regularity witnesses")
_register("tBig", "xyz",
          "(((((x v y) ^ z)' v x) ^ (x v y))' v x) ^ (((x v y) ^ z)' v y) ^ (x v y)",
          "ternary term recovering x from (x, y, t1(x, y))")
_register("p", "xyz", "(x ^ ((z ^ y) v y')) v (z ^ ((x ^ y) v y'))", "Mal'cev term")
_register("m", "xyz", "(x v y) ^ (y v z) ^ (z v x)", "majority (median) term")
_register("reg1", "xyz", "u(x, y) ^ z", "first regularity witness")
_register("reg2", "xyz", "u(x, y)' v z", "second regularity witness")


# evaluation


def _table(L, op):
    return {Join: L.join, Meet: L.meet}[op]


def evaluate(t, L, assignment):
    """Evaluate ``t`` at one assignment (variable name -> element index)."""
    if isinstance(t, Var):
        try:
            return int(assignment[t.name])
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Const):
        return L.top if t.value else L.bottom
    if isinstance(t, Comp):
        return int(L.unary[evaluate(t.arg, L, assignment)])
    if isinstance(t, Apply):
        return evaluate(REGISTRY[t.name].instantiate(t.args), L, assignment)
    a = evaluate(t.left, L, assignment)
    b = evaluate(t.right, L, assignment)
    if isinstance(t, SasakiProd):
        return int(L.meet[L.join[a, L.unary[b]], b])
    if isinstance(t, SasakiRes):
        return int(L.join[L.unary[a], L.meet[a, b]])
    return int(_table(L, type(t))[a, b])


def evaluate_all(t, L, variables):
    """Evaluate ``t`` at every assignment at once.

    Returns an integer array with one axis per entry of ``variables``; axis k
    ranges over the value of ``variables[k]``.  Entries of the result are
    broadcastable views, so callers should ``np.broadcast_to`` before
    indexing by position.
    """
    k = len(variables)
    axes = {}
    for i, v in enumerate(variables):
        shape = [1] * k
        shape[i] = L.n
        axes[v] = np.arange(L.n).reshape(shape)
    cache = {}

    def go(t):
        hit = cache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            if t.name not in axes:
                raise UnboundVariable(t.name)
            r = axes[t.name]
        elif isinstance(t, Const):
            r = np.full([1] * k, L.top if t.value else L.bottom)
        elif isinstance(t, Comp):
            r = L.unary[go(t.arg)]
        elif isinstance(t, Apply):
            r = go(expand(t))
        elif isinstance(t, SasakiProd):
            a, b = go(t.left), go(t.right)
            r = L.meet[L.join[a, L.unary[b]], b]
        elif isinstance(t, SasakiRes):
            a, b = go(t.left), go(t.right)
            r = L.join[L.unary[a], L.meet[a, b]]
        else:
            r = _table(L, type(t))[go(t.left), go(t.right)]
        cache[t] = r
        return r

    return np.broadcast_to(go(t), (L.n,) * k)


def _relation_holds(r, L, variables):
    a = evaluate_all(r.lhs, L, variables)
    b = evaluate_all(r.rhs, L, variables)
    if r.rel == "=":
        return a == b
    return L.leq[a, b]


@dataclass(frozen=True)
class Counterexample:
    assignment: dict  # variable -> element index

    def labelled(self, L):
        return {v: L.labels[x] for v, x in self.assignment.items()}

    def describe(self, L):
        return ", ".join(f"{v}={s}" for v, s in self.labelled(L).items())


class Holds:
    """Singleton-style verdict for a statement that holds everywhere."""

    def __bool__(self):
        return True

    def __eq__(self, other):
        return isinstance(other, Holds)

    def __hash__(self):
        return 0

    def __repr__(self):
        return "Holds()"


HOLDS = Holds()


def _first_failure(ok, variables):
    bad = np.argwhere(~ok)
    if len(bad) == 0:
        return HOLDS
    return Counterexample(dict(zip(variables, (int(i) for i in bad[0]))))


def check_identity(L, identity):
    """Check an identity at every assignment.

    Returns ``HOLDS`` or the lexicographically first failing assignment
    (variables ordered by name, elements by index).
    """
    if isinstance(identity, str):
        identity = parse_identity(identity)
    variables = identity.variables()
    a = evaluate_all(identity.lhs, L, variables)
    b = evaluate_all(identity.rhs, L, variables)
    return _first_failure(a == b, variables)


def check_quasi(L, quasi):
    if isinstance(quasi, str):
        quasi = parse_quasi(quasi)
    variables = quasi.variables()
    shape = (L.n,) * len(variables)
    ok = np.ones(shape, dtype=bool)
    for r in quasi.premises:
        ok = ok & _relation_holds(r, L, variables)
    ok = ~ok | _relation_holds(quasi.conclusion, L, variables)
    return _first_failure(np.broadcast_to(ok, shape), variables)


def check_statement(L, statement):
    if isinstance(statement, Identity):
        return check_identity(L, statement)
    return check_quasi(L, statement)


def parse_identity_file(text):
    """Parse an identities file into ``(line_number, source, statement)`` triples.

    Blank lines and ``#`` comments are skipped.  Parse errors are re-raised
    with the line number attached.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append((lineno, line, parse_statement(line)))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc.args[0]}", exc.pos, line) from None
    return out
