"""Diagnostic preference of a stream and localisation of responsible thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Optional, Sequence, Union

from .errors import DomainError, PreconditionError
from .lasso import Lasso


@dataclass
class DiagnosticTrace:
    """Reachable state sets, per-step preference sums and the resulting value.

    For a lasso, ``state_sets`` and ``pref_sums`` run until the pair (state
    set, lasso position) repeats; ``loop_start`` is the index the sequence
    returns to.  ``collapsed`` is set when some state set became empty, in
    which case the corresponding sums are the semiring zero.
    """

    word: Union[Lasso, tuple]
    state_sets: list
    pref_sums: list
    value: Any
    loop_start: Optional[int] = None
    collapsed: bool = False


def _step(sca, states, letter):
    prefs = []
    nxt = set()
    for q in states:
        for t in sca.outgoing(q):
            if t.action == letter:
                prefs.append(t.pref)
                nxt.add(t.target)
    return sca.semiring.big_sum(prefs), frozenset(nxt)


def diagnostic_preference(sca, sigma: Union[Lasso, Sequence]) -> DiagnosticTrace:
    """Compute the diagnostic preference of ``sigma`` in ``sca``.

    Thresholds play no part: every transition counts.  The empty finite
    word has no steps and gets the semiring one.
    """
    sr = sca.semiring
    letters = list(sigma.letters()) if isinstance(sigma, Lasso) else list(sigma)
    for a in letters:
        if a not in sca.cas.index:
            raise DomainError(f"unknown action {a!r}")
    current = frozenset((sca.initial,))
    sets, sums = [], []
    if not isinstance(sigma, Lasso):
        for a in letters:
            sets.append(current)
            xi, current = _step(sca, current, a)
            sums.append(xi)
        value = sr.glb(sums) if sums else sr.one
        return DiagnosticTrace(tuple(letters), sets, sums, value,
                               collapsed=any(not s for s in sets[1:] + [current]))
    seen = {}
    pos = 0
    while (current, pos) not in seen:
        seen[(current, pos)] = len(sets)
        sets.append(current)
        xi, current = _step(sca, current, letters[pos])
        sums.append(xi)
        pos = sigma.successor(pos)
    return DiagnosticTrace(sigma, sets, sums, sr.glb(sums), loop_start=seen[(current, pos)],
                           collapsed=any(not s for s in sets))


def threshold_bound_holds(sca, sigma) -> bool:
    """Whether the threshold lies below the diagnostic preference of ``sigma``.

    Every accepted stream (and every finite prefix of one) satisfies this.
    """
    return sca.semiring.leq(sca.threshold, diagnostic_preference(sca, sigma).value)


def excludes_at(sca, threshold, sigma: Lasso) -> bool:
    """Whether ``sigma`` is not a behaviour once the threshold is ``threshold``."""
    return not sca.with_threshold(threshold).accepts(sigma)


# -- suspects ---------------------------------------------------------------

class _Suspicion:
    """Memoised suspectness queries over subsets of the component labels."""

    def __init__(self, thresholds: dict, d, semiring):
        self.thresholds = {k: semiring.check(v) for k, v in thresholds.items()}
        self.d = semiring.check(d)
        self.sr = semiring
        self.order = {k: i for i, k in enumerate(thresholds)}
        self.products = {}
        self.found = {}

    def product(self, subset: frozenset):
        if subset not in self.products:
            self.products[subset] = self.sr.product(self.thresholds[i] for i in self.sorted(subset))
        return self.products[subset]

    def suspect(self, subset) -> bool:
        return self.sr.leq(self.product(frozenset(subset)), self.d)

    def sorted(self, subset):
        return sorted(subset, key=self.order.__getitem__)

    def find(self, subset: frozenset) -> frozenset:
        if subset in self.found:
            return self.found[subset]
        result = set()
        for i in self.sorted(subset):
            smaller = subset - {i}
            if self.suspect(smaller):
                result |= self.find(smaller)
        out = frozenset(result) if result else frozenset((subset,))
        self.found[subset] = out
        return out


def _check_labels(labels, thresholds):
    missing = [i for i in labels if i not in thresholds]
    if missing:
        raise DomainError(f"no threshold for {', '.join(map(str, missing))}")


def is_suspect(subset, thresholds: dict, d, semiring) -> bool:
    """The combined threshold of ``subset`` lies below ``d`` (empty product is one)."""
    _check_labels(subset, thresholds)
    return _Suspicion(thresholds, d, semiring).suspect(subset)


def _sort_family(family, order):
    return sorted(family, key=lambda s: (len(s), sorted(order[i] for i in s)))


def find_suspect(labels, thresholds: dict, d, semiring) -> list:
    """Minimal suspect subsets of ``labels``, found by recursive removal with memoisation.

    When ``d`` is the semiring one no threshold can exclude the stream and
    every singleton is reported.
    """
    labels = list(labels)
    _check_labels(labels, thresholds)
    sub = {i: thresholds[i] for i in labels}
    s = _Suspicion(sub, d, semiring)
    if s.d == semiring.one:
        return [frozenset((i,)) for i in labels]
    full = frozenset(labels)
    if not s.suspect(full):
        raise PreconditionError("the full label set is not suspect")
    return _sort_family(s.find(full), s.order)


def minimal_suspects_brute_force(labels, thresholds: dict, d, semiring) -> list:
    """Enumerate every subset; independent reference for :func:`find_suspect`."""
    labels = list(labels)
    order = {k: i for i, k in enumerate(labels)}
    suspects = []
    for k in range(len(labels) + 1):
        for combo in combinations(labels, k):
            prod = semiring.product(thresholds[i] for i in combo)
            if semiring.leq(prod, d):
                suspects.append(frozenset(combo))
    minimal = [s for s in suspects if not any(t < s for t in suspects)]
    return _sort_family(minimal, order)


def innocence(subset, labels, thresholds: dict, d, semiring) -> bool:
    """``subset`` shares no label with any minimal suspect subset of ``labels``."""
    subset = set(subset)
    return all(not (subset & m) for m in find_suspect(labels, thresholds, d, semiring))


@dataclass
class SuspectResult:
    labels: list
    thresholds: dict
    d: Any
    minimal: list = field(default_factory=list)

    @property
    def innocent(self) -> list:
        implicated = set().union(*self.minimal) if self.minimal else set()
        return [i for i in self.labels if i not in implicated]

    def to_json(self, semiring) -> dict:
        return {
            "labels": list(self.labels),
            "thresholds": {k: semiring.to_json(v) for k, v in self.thresholds.items()},
            "d": semiring.to_json(self.d),
            "minimal_suspects": [sorted(m, key=self.labels.index) for m in self.minimal],
            "innocent": self.innocent,
        }


def suspects(sca, sigma, thresholds: Optional[Sequence] = None) -> SuspectResult:
    """Localise ``sigma`` to the factors of a composed automaton.

    ``thresholds`` optionally overrides the factor thresholds, in factor order.
    """
    if thresholds is not None:
        sca = sca.with_factor_thresholds(thresholds)
    labels = [name for name, _ in sca.factors]
    if len(set(labels)) != len(labels):
        raise DomainError("factor names must be distinct")
    table = dict(sca.factors)
    d = diagnostic_preference(sca, sigma).value
    minimal = find_suspect(labels, table, d, sca.semiring)
    return SuspectResult(labels, table, d, minimal)
