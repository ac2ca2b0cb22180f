"""LTL with captures (``cap``) and composable (``cmp``) connectives.

Concrete syntax::

    phi ::= T | action | ( phi ) | !phi | X phi | [] phi | <> phi
          | cap phi | cmp phi | phi & phi | phi | phi | phi -> phi | phi U phi

Unary operators bind tightest, then ``&``, ``|``, ``->`` and finally
``U``; ``->`` and ``U`` associate to the right.  Derived connectives are
expanded while parsing, so formulas only ever contain the core
constructors below.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import buchi
from .buchi import Ba, Budget
from .errors import DomainError, FormulaSyntaxError, UnsupportedConnectiveError
from .lasso import Lasso


class Formula:
    __slots__ = ()

    def __str__(self):
        return _show(self, 0)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    action: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    sub: Formula


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class Captures(Formula):
    sub: Formula


@dataclass(frozen=True)
class Composable(Formula):
    sub: Formula


TOP = Top()


def Or(a, b):
    return Not(And(Not(a), Not(b)))


def Implies(a, b):
    return Or(Not(a), b)


def Eventually(a):
    return Until(TOP, a)


def Always(a):
    return Not(Eventually(Not(a)))


def next_n(k, a):
    for _ in range(k):
        a = Next(a)
    return a


def subformulas(phi):
    yield phi
    for child in _children(phi):
        yield from subformulas(child)


def _children(phi):
    if isinstance(phi, (And, Until)):
        return (phi.left, phi.right)
    if isinstance(phi, (Next, Not, Captures, Composable)):
        return (phi.sub,)
    return ()


def atoms(phi) -> set:
    return {f.action for f in subformulas(phi) if isinstance(f, Atom)}


def depth(phi) -> int:
    return 1 + max((depth(c) for c in _children(phi)), default=0)


def uses_composition(phi) -> bool:
    return any(isinstance(f, (Captures, Composable)) for f in subformulas(phi))


_PREFIX = {Not: "!", Next: "X ", Captures: "cap ", Composable: "cmp "}


def _show(phi, level):
    # level: 0 = any context, 1 = operand of &, 2 = operand of a unary operator
    if isinstance(phi, Top):
        return "T"
    if isinstance(phi, Atom):
        return phi.action
    if type(phi) in _PREFIX:
        return _PREFIX[type(phi)] + _show(phi.sub, 2)
    if isinstance(phi, And):
        text = f"{_show(phi.left, 1)} & {_show(phi.right, 2)}"  # & groups to the left
        return f"({text})" if level >= 2 else text
    text = f"{_show(phi.left, 2)} U {_show(phi.right, 0)}"
    return f"({text})" if level >= 1 else text


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->|\[\]|<>|[!&|()])|([A-Za-z_][A-Za-z0-9_]*))")
_KEYWORDS = {"T", "X", "U", "cap", "cmp"}


def _tokenize(text):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append((None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, actions):
        self.tokens = _tokenize(text)
        self.i = 0
        self.actions = actions

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        tok, pos = self.tokens[self.i]
        where = "end of input" if tok is None else repr(tok)
        raise FormulaSyntaxError(f"{message}, found {where}", pos)

    def formula(self):
        phi = self.until()
        if self.peek() is not None:
            self.fail("expected end of formula")
        return phi

    def until(self):
        left = self.implication()
        if self.peek() == "U":
            self.take()
            return Until(left, self.until())
        return left

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        phi = self.conjunction()
        while self.peek() == "|":
            self.take()
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self):
        phi = self.unary()
        while self.peek() == "&":
            self.take()
            phi = And(phi, self.unary())
        return phi

    def unary(self):
        tok = self.peek()
        ops = {"!": Not, "X": Next, "[]": Always, "<>": Eventually,
               "cap": Captures, "cmp": Composable}
        if tok in ops:
            self.take()
            return ops[tok](self.unary())
        return self.primary()

    def primary(self):
        tok, pos = self.tokens[self.i]
        if tok == "(":
            self.take()
            phi = self.until()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return phi
        if tok == "T":
            self.take()
            return TOP
        if tok is not None and tok not in _KEYWORDS and re.fullmatch(r"[A-Za-z_]\w*", tok):
            if self.actions is not None and tok not in self.actions:
                raise FormulaSyntaxError(f"unknown action {tok!r}", pos)
            self.take()
            return Atom(tok)
        self.fail("expected a formula")


def parse(text: str, cas=None) -> Formula:
    """Parse concrete syntax; atoms are checked against ``cas`` when given."""
    actions = set(cas.actions) if cas is not None else None
    return _Parser(text, actions).formula()


# -- direct evaluation on lassos -------------------------------------------

def satisfies_direct(sigma: Lasso, phi: Formula, cas=None) -> bool:
    """Evaluate a captures/composable-free formula on an eventually periodic stream.

    Every subformula gets a truth value per lasso position; until is the
    least fixpoint of its one-step unfolding over the lasso graph.
    """
    n = len(sigma)
    letters = list(sigma.letters())
    nxt = [sigma.successor(i) for i in range(n)]
    if cas is not None:
        for a in letters:
            if a not in cas.index:
                raise DomainError(f"unknown action {a!r}")
    memo = {}

    def ev(f):
        if f in memo:
            return memo[f]
        if isinstance(f, Top):
            val = [True] * n
        elif isinstance(f, Atom):
            val = [x == f.action for x in letters]
        elif isinstance(f, And):
            l, r = ev(f.left), ev(f.right)
            val = [x and y for x, y in zip(l, r)]
        elif isinstance(f, Not):
            val = [not x for x in ev(f.sub)]
        elif isinstance(f, Next):
            s = ev(f.sub)
            val = [s[nxt[i]] for i in range(n)]
        elif isinstance(f, Until):
            l, r = ev(f.left), ev(f.right)
            val = list(r)
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    if not val[i] and l[i] and val[nxt[i]]:
                        val[i] = True
                        changed = True
        else:
            raise UnsupportedConnectiveError(
                f"{type(f).__name__} is outside the directly evaluable fragment")
        memo[f] = val
        return val

    return ev(phi)[0]


# -- compilation to Büchi automata -----------------------------------------

class Compiler:
    """Recursive formula-to-automaton translation with a per-instance cache.

    With ``simplify`` (the default) double negations are cancelled and
    negation is pushed through next before complementing; both rewrites
    preserve the semantics and avoid needless complementation.
    """

    def __init__(self, cas, budget: Optional[Budget] = None, simplify=True):
        self.cas = cas
        self.alphabet = cas.actions
        self.budget = budget
        self.simplify = simplify
        self.cache = {}

    def compile(self, phi: Formula) -> Ba:
        if phi in self.cache:
            return self.cache[phi]
        ba = buchi.reduce(self._build(phi))
        if self.budget is not None:
            self.budget.record(type(phi).__name__, ba)
        self.cache[phi] = ba
        return ba

    def _build(self, phi):
        c = self.compile
        if isinstance(phi, Top):
            return buchi.universal_ba(self.alphabet)
        if isinstance(phi, Atom):
            if phi.action not in self.cas.index:
                raise DomainError(f"unknown action {phi.action!r}")
            return buchi.atom_ba(phi.action, self.alphabet)
        if isinstance(phi, And):
            return buchi.intersect(c(phi.left), c(phi.right), self.budget)
        if isinstance(phi, Until):
            aba = buchi.until_aba(c(phi.left), c(phi.right))
            return buchi.dealternate(aba, self.budget)
        if isinstance(phi, Next):
            return buchi.next_ba(c(phi.sub))
        if isinstance(phi, Captures):
            return buchi.capture_lift(c(phi.sub), self.cas)
        if isinstance(phi, Composable):
            return buchi.composable_lift(c(phi.sub), self.cas)
        if isinstance(phi, Not):
            sub = phi.sub
            if self.simplify:
                if isinstance(sub, Not):
                    return c(sub.sub)
                if isinstance(sub, Next):
                    return buchi.next_ba(c(Not(sub.sub)))
                if isinstance(sub, Top):
                    return buchi.empty_ba(self.alphabet)
            return buchi.complement(c(sub), self.budget)
        raise TypeError(f"not a formula: {phi!r}")


def compile_formula(phi: Formula, cas, budget: Optional[Budget] = None, simplify=True) -> Ba:
    return Compiler(cas, budget, simplify).compile(phi)


def satisfies(sigma: Lasso, phi: Formula, cas, budget: Optional[Budget] = None) -> bool:
    """Full semantics, including captures and composable, via the automaton of ``phi``."""
    return buchi.member(compile_formula(phi, cas, budget), sigma)
