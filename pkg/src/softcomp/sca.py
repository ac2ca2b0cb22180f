"""Soft Component Automata: construction, composition and language membership."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Any, NamedTuple

from .cas import Cas
from .errors import CompositionError, DomainError
from .lasso import Lasso
from .semiring import Semiring


class Transition(NamedTuple):
    source: str
    action: str
    pref: Any
    target: str


@dataclass(frozen=True, eq=False)
class Sca:
    """A finite transition system labelled with (action, preference) pairs.

    ``factors`` records the leaves of a composition as ``(name, threshold)``
    pairs, so diagnostics can attribute thresholds to components.  A
    non-composed automaton has itself as its only factor.
    """

    states: tuple
    initial: str
    cas: Cas
    semiring: Semiring
    transitions: tuple
    threshold: Any
    name: str = "A"
    factors: tuple = ()
    _out: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        trans = tuple(Transition(*t) for t in self.transitions)
        object.__setattr__(self, "transitions", trans)
        known = set(self.states)
        if len(known) != len(self.states):
            raise DomainError(f"{self.name}: duplicate state names")
        if self.initial not in known:
            raise DomainError(f"{self.name}: initial state {self.initial!r} is not a state")
        object.__setattr__(self, "threshold", self.semiring.check(self.threshold))
        for t in trans:
            if t.source not in known or t.target not in known:
                raise DomainError(f"{self.name}: transition {t} uses an unknown state")
            if t.action not in self.cas.index:
                raise DomainError(f"{self.name}: transition {t} uses unknown action {t.action!r}")
            self.semiring.check(t.pref)
        if not self.factors:
            object.__setattr__(self, "factors", ((self.name, self.threshold),))
        out = {q: [] for q in self.states}
        for t in trans:
            out[t.source].append(t)
        object.__setattr__(self, "_out", out)

    def outgoing(self, q) -> list:
        return self._out[q]

    def admissible(self, t: Transition) -> bool:
        return self.semiring.leq(self.threshold, t.pref)

    def admissible_transitions(self) -> list:
        return [t for t in self.transitions if self.admissible(t)]

    def with_threshold(self, threshold) -> "Sca":
        return replace(self, threshold=self.semiring.element(threshold),
                       factors=self.factors if len(self.factors) > 1 else (),
                       _out=None)

    def with_factor_thresholds(self, thresholds) -> "Sca":
        """Replace every factor threshold; the overall threshold becomes their product."""
        thresholds = [self.semiring.element(t) for t in thresholds]
        if len(thresholds) != len(self.factors):
            raise DomainError(f"{self.name} has {len(self.factors)} factors, "
                              f"got {len(thresholds)} thresholds")
        factors = tuple((name, t) for (name, _), t in zip(self.factors, thresholds))
        return replace(self, threshold=self.semiring.product(thresholds),
                       factors=factors, _out=None)

    def renamed(self, name) -> "Sca":
        factors = self.factors if len(self.factors) > 1 else ()
        return replace(self, name=name, factors=factors, _out=None)

    # -- behaviour ---------------------------------------------------------

    def reachable(self) -> set:
        """States reachable from the initial one over admissible transitions."""
        seen = {self.initial}
        todo = [self.initial]
        while todo:
            q = todo.pop()
            for t in self._out[q]:
                if t.target not in seen and self.admissible(t):
                    seen.add(t.target)
                    todo.append(t.target)
        return seen

    def trim(self) -> "Sca":
        keep = self.reachable()
        return replace(self, states=tuple(q for q in self.states if q in keep),
                       transitions=tuple(t for t in self.transitions
                                         if t.source in keep and t.target in keep),
                       factors=self.factors if len(self.factors) > 1 else (),
                       _out=None)

    def accepts(self, sigma: Lasso) -> bool:
        """Whether ``sigma`` is a behaviour: an infinite run of admissible transitions.

        Works on the product of the automaton with the lasso graph of
        ``sigma``: the stream is accepted iff some infinite path exists from
        the initial node, i.e. pruning dead ends leaves a reachable node.
        """
        for a in sigma.letters():
            if a not in self.cas.index:
                raise DomainError(f"unknown action {a!r}")
        succ = {}
        start = (self.initial, 0)
        todo = [start]
        succ[start] = None
        while todo:
            node = todo.pop()
            q, pos = node
            letter = sigma.prefix[pos] if pos < len(sigma.prefix) else sigma.cycle[pos - len(sigma.prefix)]
            nxt = sigma.successor(pos)
            targets = {(t.target, nxt) for t in self._out[q]
                       if t.action == letter and self.admissible(t)}
            succ[node] = targets
            for m in targets:
                if m not in succ:
                    succ[m] = None
                    todo.append(m)
        return _has_infinite_path(succ)


def _has_infinite_path(succ: dict) -> bool:
    # repeatedly drop nodes without live successors; survivors lie on or lead to cycles
    pred = {n: set() for n in succ}
    outdeg = {}
    for n, targets in succ.items():
        outdeg[n] = len(targets)
        for m in targets:
            pred[m].add(n)
    dead = deque(n for n, d in outdeg.items() if d == 0)
    alive = len(succ)
    while dead:
        n = dead.popleft()
        alive -= 1
        for p in pred[n]:
            outdeg[p] -= 1
            if outdeg[p] == 0:
                dead.append(p)
    return alive > 0


def compose(a0: Sca, a1: Sca, name=None) -> Sca:
    """Parallel composition: synchronise transitions with composable actions."""
    if a0.cas != a1.cas:
        raise CompositionError("automata do not share a CAS")
    if a0.semiring != a1.semiring:
        raise CompositionError("automata do not share a semiring")
    cas, sr = a0.cas, a0.semiring

    def pair(q0, q1):
        return f"{q0},{q1}"

    states = tuple(pair(q0, q1) for q0 in a0.states for q1 in a1.states)
    transitions = []
    for t0 in a0.transitions:
        for t1 in a1.transitions:
            if cas.composable(t0.action, t1.action):
                transitions.append(Transition(
                    pair(t0.source, t1.source), cas.compose(t0.action, t1.action),
                    sr.times(t0.pref, t1.pref), pair(t0.target, t1.target)))
    return Sca(states=states, initial=pair(a0.initial, a1.initial), cas=cas, semiring=sr,
               transitions=tuple(transitions), threshold=sr.times(a0.threshold, a1.threshold),
               name=name or f"{a0.name}*{a1.name}", factors=a0.factors + a1.factors)


def compose_all(automata, name=None) -> Sca:
    automata = list(automata)
    if not automata:
        raise CompositionError("nothing to compose")
    result = automata[0]
    for other in automata[1:]:
        result = compose(result, other)
    if name:
        result = replace(result, name=name, _out=None)
    return result


def halt_augment(a: Sca, halt_pref=None, halt="halt", halt_state="halt") -> Sca:
    """Add a halt state reachable from every state by a ``halt`` transition.

    The CAS must already treat ``halt`` as composable with, and absorbing,
    every action (see :func:`softcomp.cas.with_halt`).
    """
    cas = a.cas
    if halt not in cas.index:
        raise DomainError(f"CAS has no {halt!r} action")
    for b in cas.actions:
        if not cas.composable(halt, b) or cas.compose(halt, b) != halt:
            raise DomainError(f"CAS does not make {halt!r} absorb {b!r}")
    if halt_state in a.states:
        raise DomainError(f"state name {halt_state!r} already in use")
    pref = a.semiring.one if halt_pref is None else a.semiring.check(halt_pref)
    states = a.states + (halt_state,)
    extra = tuple(Transition(q, halt, pref, halt_state) for q in states)
    return replace(a, states=states, transitions=a.transitions + extra,
                   factors=a.factors if len(a.factors) > 1 else (), _out=None)


def sca_from_json(name, spec, cas, semiring) -> Sca:
    transitions = []
    for t in spec.get("transitions", []):
        transitions.append(Transition(t["from"], t["action"], semiring.coerce(t["pref"]), t["to"]))
    return Sca(states=tuple(spec["states"]), initial=spec["initial"], cas=cas,
               semiring=semiring, transitions=tuple(transitions),
               threshold=semiring.coerce(spec.get("threshold", _json_one(semiring))),
               name=name)


def _json_one(semiring):
    return semiring.to_json(semiring.one)


def sca_to_json(a: Sca) -> dict:
    sr = a.semiring
    return {
        "states": list(a.states),
        "initial": a.initial,
        "threshold": sr.to_json(a.threshold),
        "transitions": [{"from": t.source, "action": t.action, "pref": sr.to_json(t.pref),
                         "to": t.target} for t in a.transitions],
    }
