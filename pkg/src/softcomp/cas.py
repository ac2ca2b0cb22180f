"""Component Action Systems.

A CAS is a finite set of actions together with a composability relation
and a partial composition operator defined exactly on composable pairs.
The raw table is stored as given (ordered pairs), so that ``validate``
can report asymmetric or otherwise broken input instead of hiding it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .errors import DomainError, IncomposableError, UnderspecifiedError


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def __str__(self):
        return f"{self.axiom}: {', '.join(map(str, self.witness))}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set:
        return {v.axiom for v in self.violations}

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


class Cas:
    """Actions, composability and composition, backed by dense index tables."""

    def __init__(self, actions: Iterable[str], table: Mapping[tuple, str]):
        self.actions = tuple(actions)
        if len(set(self.actions)) != len(self.actions):
            raise DomainError("duplicate action names")
        self.index = {a: i for i, a in enumerate(self.actions)}
        n = len(self.actions)
        # _comp[i][j] is the result index, -1 when not composable, -2 when the
        # result names an unknown action (kept so that validate can report it)
        self._comp = [[-1] * n for _ in range(n)]
        self._dangling = []
        for (a, b), r in table.items():
            if a not in self.index or b not in self.index:
                self._dangling.append((a, b, r))
                continue
            k = self.index.get(r, -2)
            if k == -2:
                self._dangling.append((a, b, r))
            self._comp[self.index[a]][self.index[b]] = k
        self._capt = None

    @classmethod
    def from_pairs(cls, actions, pairs, closure=False):
        """Build a CAS from generator pairs ``((a, b), result)``.

        The relation is made reflexive and symmetric (and transitive when
        ``closure`` is set), with ``a . a = a`` added for every action.
        Pairs forced by the closure without a given result raise
        :class:`UnderspecifiedError`.
        """
        actions = list(actions)
        results = {}
        for (a, b), r in pairs:
            for x in (a, b, r):
                if x not in actions:
                    raise DomainError(f"unknown action {x!r}")
            for key in ((a, b), (b, a)):
                if results.get(key, r) != r:
                    raise DomainError(f"conflicting results for {key}")
                results[key] = r
        for a in actions:
            if results.get((a, a), a) != a:
                raise DomainError(f"{a} composed with itself must be {a}")
            results[(a, a)] = a
        related = set(results)
        if closure:
            related = _transitive_closure(related)
        missing = sorted({tuple(sorted(p)) for p in related if p not in results})
        if missing:
            raise UnderspecifiedError(missing)
        return cls(actions, results)

    # -- queries -----------------------------------------------------------

    def _idx(self, a) -> int:
        try:
            return self.index[a]
        except KeyError:
            raise DomainError(f"unknown action {a!r}") from None

    def composable(self, a, b) -> bool:
        return self._comp[self._idx(a)][self._idx(b)] != -1

    def compose(self, a, b) -> str:
        k = self._comp[self._idx(a)][self._idx(b)]
        if k == -1:
            raise IncomposableError(a, b)
        if k == -2:
            raise DomainError(f"composition of {a} and {b} names an unknown action")
        return self.actions[k]

    def table(self) -> dict:
        out = {}
        for i, a in enumerate(self.actions):
            for j, b in enumerate(self.actions):
                k = self._comp[i][j]
                if k >= 0:
                    out[(a, b)] = self.actions[k]
        return out

    def _capture_table(self):
        if self._capt is None:
            n = len(self.actions)
            capt = [[False] * n for _ in range(n)]
            for i in range(n):
                for k in self._comp[i]:
                    if k >= 0:
                        capt[i][k] = True
            self._capt = capt
        return self._capt

    def captures(self, a, b) -> bool:
        """``a`` is captured by ``b``: some ``c`` composes with ``a`` into ``b``."""
        return self._capture_table()[self._idx(a)][self._idx(b)]

    def captured_by(self, b) -> list:
        j = self._idx(b)
        capt = self._capture_table()
        return [a for i, a in enumerate(self.actions) if capt[i][j]]

    def capturing(self, a) -> list:
        i = self._idx(a)
        return [b for j, b in enumerate(self.actions) if self._capture_table()[i][j]]

    def partners(self, a) -> list:
        """All actions composable with ``a``."""
        row = self._comp[self._idx(a)]
        return [b for j, b in enumerate(self.actions) if row[j] != -1]

    def __eq__(self, other):
        return (isinstance(other, Cas) and self.actions == other.actions
                and self._comp == other._comp and self._dangling == other._dangling)

    def __hash__(self):
        return hash(self.actions)

    def __repr__(self):
        return f"Cas({len(self.actions)} actions)"

    # -- axioms ------------------------------------------------------------

    def validate(self) -> ValidationReport:
        """Exhaustively check the CAS axioms, reporting every violation."""
        report = ValidationReport()
        add = report.violations.append
        acts = self.actions
        comp = self._comp
        n = len(acts)
        for a, b, r in self._dangling:
            add(Violation("dangling", (a, b, r)))
        for i in range(n):
            if comp[i][i] == -1:
                add(Violation("reflexivity", (acts[i],)))
            elif comp[i][i] != i:
                add(Violation("idempotency", (acts[i],)))
        for i, j in product(range(n), repeat=2):
            if i >= j:
                continue
            if (comp[i][j] == -1) != (comp[j][i] == -1):
                add(Violation("symmetry", (acts[i], acts[j])))
            elif comp[i][j] != -1 and comp[i][j] != comp[j][i]:
                add(Violation("commutativity", (acts[i], acts[j])))
        for i, j, k in product(range(n), repeat=3):
            ij = comp[i][j]
            jk = comp[j][k]
            left = ij >= 0 and comp[ij][k] != -1
            right = jk >= 0 and comp[i][jk] != -1
            if left != right:
                add(Violation("associativity", (acts[i], acts[j], acts[k])))
            elif left and comp[ij][k] != comp[i][jk]:
                add(Violation("associativity", (acts[i], acts[j], acts[k])))
        return report

    def incomposability_violations(self) -> list:
        """Counterexamples to "incomposability carries over to compositions".

        Part one: a~b, not a~c, yet (a.b)~c.  Part two: not a~c and a
        captured by b, yet b~c.  Both are consequences of the axioms.
        """
        out = []
        acts = self.actions
        comp = self._comp
        capt = self._capture_table()
        n = len(acts)
        for i, j, k in product(range(n), repeat=3):
            if comp[i][k] != -1:
                continue
            ij = comp[i][j]
            if ij >= 0 and comp[ij][k] != -1:
                out.append(Violation("incomposable-composition", (acts[i], acts[j], acts[k])))
            if capt[i][j] and comp[j][k] != -1:
                out.append(Violation("incomposable-capture", (acts[i], acts[j], acts[k])))
        return out

    def preorder_violations(self) -> list:
        out = []
        capt = self._capture_table()
        n = len(self.actions)
        for i in range(n):
            if not capt[i][i]:
                out.append(Violation("capture-reflexivity", (self.actions[i],)))
        for i, j, k in product(range(n), repeat=3):
            if capt[i][j] and capt[j][k] and not capt[i][k]:
                out.append(Violation("capture-transitivity",
                                     (self.actions[i], self.actions[j], self.actions[k])))
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        for i, a in enumerate(self.actions):
            for b in self.actions[i:]:
                if self.composable(a, b) and not (a == b and self.compose(a, b) == a):
                    entries.append({"pair": [a, b], "result": self.compose(a, b)})
        return {"actions": list(self.actions), "composable": entries, "closure": False}


def _transitive_closure(pairs: set) -> set:
    related = set(pairs)
    changed = True
    while changed:
        changed = False
        succ = {}
        for a, b in related:
            succ.setdefault(a, set()).add(b)
        for a, b in list(related):
            for c in succ.get(b, ()):
                if (a, c) not in related:
                    related.add((a, c))
                    changed = True
    return related


def cas_from_json(spec: dict) -> Cas:
    actions = spec.get("actions")
    if not isinstance(actions, list):
        raise DomainError("CAS needs an 'actions' list")
    pairs = []
    for entry in spec.get("composable", []):
        a, b = entry["pair"]
        pairs.append(((a, b), entry["result"]))
    return Cas.from_pairs(actions, pairs, closure=bool(spec.get("closure", False)))


def identity_cas(actions) -> Cas:
    """Only self-composition; the capture preorder is equality."""
    return Cas.from_pairs(actions, [])


def with_halt(cas: Cas, halt="halt") -> Cas:
    """Extend a CAS with an action composable with everything, absorbing it.

    The result generally violates associativity (halt bridges otherwise
    incomposable actions); it exists only to support halt augmentation.
    """
    table = dict(cas.table())
    actions = list(cas.actions)
    if halt not in actions:
        actions.append(halt)
    for a in actions:
        table[(a, halt)] = halt
        table[(halt, a)] = halt
    return Cas(actions, table)
