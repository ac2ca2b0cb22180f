"""Büchi and alternating Büchi automata over a finite alphabet of actions.

States are the integers ``0 .. n-1``; ``delta[q]`` maps a letter to the
tuple of successor states.  Every construction that can blow up builds
its result by exploring from the initial state only, and charges each
new state against an optional :class:`Budget`.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional

from .errors import CapacityError
from .lasso import Lasso

DEFAULT_MAX_STATES = 10**6


@dataclass
class Budget:
    """State ceiling shared by a chain of constructions, plus a size log."""

    max_states: int = DEFAULT_MAX_STATES
    sizes: list = field(default_factory=list)

    def charge(self, stage: str, count: int):
        if count > self.max_states:
            raise CapacityError(stage, self.max_states)

    def record(self, stage: str, ba: "Ba"):
        self.sizes.append((stage, ba.n))
        return ba


class Ba:
    """Nondeterministic Büchi automaton with a single initial state."""

    __slots__ = ("n", "alphabet", "delta", "initial", "accepting", "names")

    def __init__(self, n, alphabet, delta, initial, accepting, names=None):
        self.n = n
        self.alphabet = tuple(alphabet)
        self.delta = delta
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.names = names

    @property
    def states(self):
        return range(self.n)

    def successors(self, q, a) -> tuple:
        return self.delta[q].get(a, ())

    def edges(self):
        for q in range(self.n):
            for a, targets in self.delta[q].items():
                for r in targets:
                    yield q, a, r

    def edge_count(self) -> int:
        return sum(len(t) for row in self.delta for t in row.values())

    def is_deterministic(self) -> bool:
        return all(len(t) <= 1 for row in self.delta for t in row.values())

    def name(self, q):
        return self.names[q] if self.names else q

    def __repr__(self):
        return f"Ba(states={self.n}, accepting={len(self.accepting)}, edges={self.edge_count()})"


class Aba:
    """Alternating Büchi automaton: ``delta[q][a]`` is a list of destination sets."""

    __slots__ = ("n", "alphabet", "delta", "initial", "accepting")

    def __init__(self, n, alphabet, delta, initial, accepting):
        self.n = n
        self.alphabet = tuple(alphabet)
        self.delta = delta
        self.initial = initial
        self.accepting = frozenset(accepting)

    def __repr__(self):
        return f"Aba(states={self.n}, accepting={len(self.accepting)})"


def _explore(alphabet, start: Hashable, step: Callable, is_accepting: Callable,
             stage: str, budget: Optional[Budget], keep_names=False) -> Ba:
    """Build a Ba by breadth-first exploration of abstract states.

    ``step(key, letter)`` yields successor keys.
    """
    index = {start: 0}
    keys = [start]
    delta = []
    queue = deque([start])
    limit = budget.max_states if budget else None
    while queue:
        key = queue.popleft()
        row = {}
        for a in alphabet:
            targets = []
            for nxt in step(key, a):
                i = index.get(nxt)
                if i is None:
                    i = len(keys)
                    if limit is not None and i >= limit:
                        raise CapacityError(stage, limit)
                    index[nxt] = i
                    keys.append(nxt)
                    queue.append(nxt)
                targets.append(i)
            if targets:
                row[a] = tuple(sorted(set(targets)))
        delta.append(row)
    accepting = [i for i, k in enumerate(keys) if is_accepting(k)]
    ba = Ba(len(keys), alphabet, delta, 0, accepting, keys if keep_names else None)
    if budget is not None:
        budget.record(stage, ba)
    return ba


# -- basic automata -------------------------------------------------------

def universal_ba(alphabet) -> Ba:
    """Accepts every stream."""
    alphabet = tuple(alphabet)
    return Ba(1, alphabet, [{a: (0,) for a in alphabet}], 0, [0])


def empty_ba(alphabet) -> Ba:
    return Ba(1, tuple(alphabet), [{}], 0, [])


def atom_ba(action, alphabet) -> Ba:
    """Streams whose first letter is exactly ``action``."""
    alphabet = tuple(alphabet)
    if action not in alphabet:
        raise ValueError(f"{action!r} is not in the alphabet")
    return Ba(2, alphabet, [{action: (1,)}, {a: (1,) for a in alphabet}], 0, [1])


def sca_to_ba(sca) -> Ba:
    """Keep admissible transitions, forget preferences, accept everywhere."""
    names = list(sca.states)
    index = {q: i for i, q in enumerate(names)}
    delta = [dict() for _ in names]
    for t in sca.transitions:
        if sca.admissible(t):
            row = delta[index[t.source]]
            row.setdefault(t.action, set()).add(index[t.target])
    delta = [{a: tuple(sorted(s)) for a, s in row.items()} for row in delta]
    return Ba(len(names), sca.cas.actions, delta, index[sca.initial], range(len(names)), names)


def embed(ba: Ba) -> Aba:
    """View a Ba as an Aba with singleton destinations."""
    delta = [{a: [frozenset((r,)) for r in targets] for a, targets in row.items()}
             for row in ba.delta]
    return Aba(ba.n, ba.alphabet, delta, ba.initial, ba.accepting)


# -- language operations --------------------------------------------------

def intersect(a1: Ba, a2: Ba, budget: Optional[Budget] = None) -> Ba:
    """Product automaton accepting the intersection of both languages."""
    alphabet = a1.alphabet
    all1 = len(a1.accepting) == a1.n
    all2 = len(a2.accepting) == a2.n
    if all1 or all2:
        def step(key, a):
            p, q = key
            for p2 in a1.successors(p, a):
                for q2 in a2.successors(q, a):
                    yield (p2, q2)

        if all1 and all2:
            acc = lambda key: True  # noqa: E731
        elif all1:
            acc = lambda key: key[1] in a2.accepting  # noqa: E731
        else:
            acc = lambda key: key[0] in a1.accepting  # noqa: E731
        return _explore(alphabet, (a1.initial, a2.initial), step, acc, "intersect", budget)

    def step2(key, a):
        p, q, phase = key
        if phase == 1:
            nxt = 2 if p in a1.accepting else 1
        else:
            nxt = 1 if q in a2.accepting else 2
        for p2 in a1.successors(p, a):
            for q2 in a2.successors(q, a):
                yield (p2, q2, nxt)

    return _explore(alphabet, (a1.initial, a2.initial, 1), step2,
                    lambda key: key[2] == 1 and key[0] in a1.accepting, "intersect", budget)


def until_aba(a1: Ba, a2: Ba) -> Aba:
    """Alternating automaton for "a1 holds at every shift until a2 holds".

    States of ``a1`` keep their numbers, those of ``a2`` are shifted by
    ``a1.n``, and the last state is the pivot, which either branches (a
    copy of ``a1`` starts while the pivot waits) or stops into ``a2``.
    """
    off = a1.n
    pivot = a1.n + a2.n
    delta = []
    for row in a1.delta:
        delta.append({a: [frozenset((r,)) for r in ts] for a, ts in row.items()})
    for row in a2.delta:
        delta.append({a: [frozenset((r + off,)) for r in ts] for a, ts in row.items()})
    prow = {}
    for a in a1.alphabet:
        options = [frozenset((r, pivot)) for r in a1.successors(a1.initial, a)]
        options += [frozenset((r + off,)) for r in a2.successors(a2.initial, a)]
        if options:
            prow[a] = options
    delta.append(prow)
    accepting = set(a1.accepting) | {q + off for q in a2.accepting}
    return Aba(pivot + 1, a1.alphabet, delta, pivot, accepting)


def dealternate(aba: Aba, budget: Optional[Budget] = None) -> Ba:
    """Miyano-Hayashi breakpoint construction.

    A state is a pair ``(S, O)``: the current level of the run tree and the
    subset of it still owing a visit to an accepting state since the last
    breakpoint.  Accepting states are those with ``O`` empty.
    """
    acc = aba.accepting
    delta = aba.delta

    def step(key, a):
        level, owing = key
        order = sorted(level)
        options = [delta[q].get(a) for q in order]
        if not all(options):
            return
        pos = {q: i for i, q in enumerate(order)}
        seen = set()
        for choice in itertools.product(*options):
            nxt = frozenset().union(*choice) if choice else frozenset()
            if owing:
                owe = frozenset().union(*(choice[pos[q]] for q in owing)) - acc
            else:
                owe = nxt - acc
            item = (nxt, owe)
            if item not in seen:
                seen.add(item)
                yield item

    return _explore(aba.alphabet, (frozenset((aba.initial,)), frozenset()), step,
                    lambda key: not key[1], "dealternate", budget)


def next_ba(a1: Ba) -> Ba:
    """Accepts a stream iff ``a1`` accepts it with the first letter removed."""
    start = a1.n
    delta = [dict(row) for row in a1.delta]
    delta.append({a: (a1.initial,) for a in a1.alphabet})
    return Ba(a1.n + 1, a1.alphabet, delta, start, a1.accepting)


def _lift(a1: Ba, sources: Callable) -> Ba:
    delta = []
    for row in a1.delta:
        new = {}
        for b in a1.alphabet:
            targets = set()
            for a in sources(b):
                targets.update(row.get(a, ()))
            if targets:
                new[b] = tuple(sorted(targets))
        delta.append(new)
    return Ba(a1.n, a1.alphabet, delta, a1.initial, a1.accepting)


def capture_lift(a1: Ba, cas) -> Ba:
    """Streams that pointwise capture some stream accepted by ``a1``."""
    return _lift(a1, cas.captured_by)


def composable_lift(a1: Ba, cas) -> Ba:
    """Streams pointwise composable with some stream accepted by ``a1``."""
    return _lift(a1, cas.partners)


# -- complementation ------------------------------------------------------

def complement(a1: Ba, budget: Optional[Budget] = None) -> Ba:
    """Exact complement.

    The input is reduced first; deterministic automata use the linear
    co-Büchi dual, everything else goes through the rank-based
    construction of :func:`complement_rank`.
    """
    reduced = reduce(a1)
    if not reduced.accepting:
        return universal_ba(a1.alphabet)
    if reduced.is_deterministic():
        result = complement_deterministic(reduced, budget)
    else:
        result = complement_rank(reduced, budget)
    return reduce(result)


def complement_deterministic(a1: Ba, budget: Optional[Budget] = None) -> Ba:
    """Complement of a deterministic Ba (missing moves go to a rejecting sink).

    The run is unique, so the stream is rejected iff the run eventually
    avoids accepting states forever: guess the moment, then stay outside.
    """
    if not a1.is_deterministic():
        raise ValueError("automaton is not deterministic")
    sink = -1
    acc = a1.accepting

    def move(q, a):
        if q == sink:
            return sink
        t = a1.successors(q, a)
        return t[0] if t else sink

    def step(key, a):
        q, phase = key
        r = move(q, a)
        if phase == 0:
            yield (r, 0)
            if r not in acc:
                yield (r, 1)
        elif r not in acc:
            yield (r, 1)

    return _explore(a1.alphabet, (a1.initial, 0), step, lambda key: key[1] == 1,
                    "complement", budget)


def _tight_rankings(states, bounds, accepting):
    """Enumerate tight level rankings of ``states``.

    ``bounds[i]`` caps the rank of ``states[i]``; accepting states only take
    even ranks.  Tight: the largest rank is odd and every smaller odd rank
    occurs.  The empty ranking is tight.
    """
    k = len(states)
    if k == 0:
        yield ()
        return
    free = [q not in accepting for q in states]
    n_free = sum(free)
    max_top = min(2 * n_free - 1, max(bounds))
    for top in range(1, max_top + 1, 2):
        needed = (top + 1) // 2
        ranks = [0] * k
        remaining_free = [0] * (k + 1)
        for i in range(k - 1, -1, -1):
            remaining_free[i] = remaining_free[i + 1] + free[i]

        def rec(i, missing):
            if len(missing) > remaining_free[i]:
                return
            if i == k:
                yield tuple(ranks)
                return
            cap = min(bounds[i], top)
            step = 2 if not free[i] else 1
            for r in range(0, cap + 1, step):
                ranks[i] = r
                if r % 2 == 1 and r in missing:
                    yield from rec(i + 1, missing - {r})
                else:
                    yield from rec(i + 1, missing)

        if needed <= n_free:
            yield from rec(0, frozenset(range(1, top + 1, 2)))


def complement_rank(a1: Ba, budget: Optional[Budget] = None) -> Ba:
    """Rank-based complementation with tight rankings.

    Two kinds of states: a subset-construction phase ``("S", level)`` and a
    ranked phase ``("R", ranking, owing)`` entered by guessing a tight
    ranking.  Ranks never increase along edges, accepting states carry
    even ranks, and a breakpoint (``owing`` empty) recurs infinitely often
    iff every path of the run DAG gets trapped in an odd rank.
    """
    acc = a1.accepting

    def post(level, a):
        out = set()
        for q in level:
            out.update(a1.successors(q, a))
        return frozenset(out)

    def step(key, a):
        if key[0] == "S":
            nxt = post(key[1], a)
            yield ("S", nxt)
            order = tuple(sorted(nxt))
            bounds = [2 * a1.n] * len(order)
            for ranks in _tight_rankings(order, bounds, acc):
                yield ("R", tuple(zip(order, ranks)), frozenset())
            return
        _, ranking, owing = key
        bound = {}
        for q, r in ranking:
            for q2 in a1.successors(q, a):
                if bound.get(q2, r) >= r:
                    bound[q2] = r
        order = tuple(sorted(bound))
        bounds = [bound[q] for q in order]
        for ranks in _tight_rankings(order, bounds, acc):
            even = frozenset(q for q, r in zip(order, ranks) if r % 2 == 0)
            if owing:
                owe = post(owing, a) & even
            else:
                owe = even
            yield ("R", tuple(zip(order, ranks)), owe)

    return _explore(a1.alphabet, ("S", frozenset((a1.initial,))), step,
                    lambda key: key[0] == "R" and not key[2], "complement", budget)


# -- graph algorithms -----------------------------------------------------

def _sccs(nodes: Iterable, succ: Callable) -> list:
    """Tarjan's algorithm, iterative; returns a list of SCCs (lists of nodes)."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    result = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    pushed = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(comp)
    return result


def _successor_sets(ba: Ba) -> list:
    return [set(itertools.chain.from_iterable(row.values())) for row in ba.delta]


def _reachable(ba: Ba) -> set:
    seen = {ba.initial}
    todo = [ba.initial]
    while todo:
        q = todo.pop()
        for targets in ba.delta[q].values():
            for r in targets:
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
    return seen


def _good_states(ba: Ba, within: set) -> set:
    """States of ``within`` lying on a cycle through an accepting state."""
    succ = _successor_sets(ba)
    good = set()
    for comp in _sccs(sorted(within), lambda q: [r for r in succ[q] if r in within]):
        cset = set(comp)
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            continue
        if cset & ba.accepting:
            good |= cset
    return good


def _backward_closure(ba: Ba, targets: set, within: set) -> set:
    pred = {q: [] for q in within}
    for q in within:
        for ts in ba.delta[q].values():
            for r in ts:
                if r in within:
                    pred[r].append(q)
    seen = set(targets)
    todo = list(targets)
    while todo:
        q = todo.pop()
        for p in pred[q]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def restrict(ba: Ba, keep: set) -> Ba:
    """Sub-automaton on ``keep`` (must contain the initial state), renumbered."""
    order = sorted(keep)
    index = {q: i for i, q in enumerate(order)}
    delta = []
    for q in order:
        row = {}
        for a, ts in ba.delta[q].items():
            kept = tuple(index[r] for r in ts if r in index)
            if kept:
                row[a] = kept
        delta.append(row)
    names = [ba.names[q] for q in order] if ba.names else None
    return Ba(len(order), ba.alphabet, delta, index[ba.initial],
              [index[q] for q in ba.accepting if q in index], names)


def trim(ba: Ba) -> Ba:
    """Drop states that are unreachable or cannot reach an accepting cycle."""
    reach = _reachable(ba)
    live = _backward_closure(ba, _good_states(ba, reach), reach)
    if ba.initial not in live:
        return empty_ba(ba.alphabet)
    return restrict(ba, live)


def simulation(ba: Ba) -> list:
    """Direct simulation preorder: ``sim[q]`` is the set of states simulating ``q``."""
    n = ba.n
    acc = ba.accepting
    delta = ba.delta
    sim = []
    for q in range(n):
        cands = set()
        for r in range(n):
            if q in acc and r not in acc:
                continue
            if all(a in delta[r] for a in delta[q]):
                cands.add(r)
        sim.append(cands)
    changed = True
    while changed:
        changed = False
        for q in range(n):
            drop = []
            for r in sim[q]:
                if r == q:
                    continue
                for a, ts in delta[q].items():
                    rts = delta[r][a]
                    if not all(any(r2 in sim[q2] for r2 in rts) for q2 in ts):
                        drop.append(r)
                        break
            if drop:
                sim[q].difference_update(drop)
                changed = True
    return sim


def quotient(ba: Ba, max_states=400) -> Ba:
    """Merge simulation-equivalent states and prune dominated edges.

    Skipped (identity) above ``max_states`` states to bound the quadratic cost.
    """
    if ba.n > max_states or ba.n <= 1:
        return ba
    sim = simulation(ba)
    rep = list(range(ba.n))
    for q in range(ba.n):
        for r in range(q):
            if rep[r] == r and r in sim[q] and q in sim[r]:
                rep[q] = r
                break
    classes = sorted(set(rep))
    index = {c: i for i, c in enumerate(classes)}
    delta = []
    for c in classes:
        row = {}
        for a, ts in ba.delta[c].items():
            targets = {rep[t] for t in ts}
            # drop successors strictly simulated by another successor
            kept = [t for t in targets
                    if not any(u != t and u in sim[t] and t not in sim[u] for u in targets)]
            row[a] = tuple(sorted(index[t] for t in kept))
        delta.append(row)
    accepting = [index[c] for c in classes if c in ba.accepting]
    return Ba(len(classes), ba.alphabet, delta, index[rep[ba.initial]], accepting)


def reduce(ba: Ba) -> Ba:
    """Language-preserving size reduction: trim, then simulation quotient, then trim."""
    out = trim(ba)
    if not out.accepting:
        return out
    return trim(quotient(out))


# -- queries --------------------------------------------------------------

def member(ba: Ba, sigma: Lasso) -> bool:
    """Whether ``ba`` accepts the eventually periodic stream ``sigma``."""
    letters = list(sigma.letters())
    start = (ba.initial, 0)
    succ = {}
    todo = [start]
    succ[start] = None
    while todo:
        node = todo.pop()
        q, pos = node
        nxt = sigma.successor(pos)
        targets = [(r, nxt) for r in ba.successors(q, letters[pos])]
        succ[node] = targets
        for m in targets:
            if m not in succ:
                succ[m] = None
                todo.append(m)
    for comp in _sccs(list(succ), lambda v: succ[v]):
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            continue
        if any(q in ba.accepting for q, _ in comp):
            return True
    return False


def _bfs_words(ba: Ba, sources: dict, order) -> dict:
    """Shortest, then lexicographically least, words reaching each state.

    ``sources`` maps start states to their initial words.
    """
    words = dict(sources)
    queue = deque(sorted(sources, key=lambda q: (len(sources[q]), sources[q])))
    while queue:
        q = queue.popleft()
        w = words[q]
        for a in order:
            for r in ba.successors(q, a):
                if r not in words:
                    words[r] = w + (a,)
                    queue.append(r)
    return words


def emptiness(ba: Ba) -> Optional[Lasso]:
    """``None`` when the language is empty, else a canonical accepted lasso.

    The witness minimises the prefix length, then the cycle length, then
    both words lexicographically (alphabet in sorted order).
    """
    reach = _reachable(ba)
    good = _good_states(ba, reach) & ba.accepting
    if not good:
        return None
    order = sorted(ba.alphabet)
    prefixes = _bfs_words(ba, {ba.initial: ()}, order)
    shortest = min(len(prefixes[f]) for f in good)
    best = None
    for f in sorted(good):
        if len(prefixes[f]) != shortest:
            continue
        starts = {}
        for a in order:
            for r in ba.successors(f, a):
                if r not in starts:
                    starts[r] = (a,)
        if f in starts:
            cycle = starts[f]
        else:
            cycle = _bfs_words(ba, starts, order).get(f)
        if cycle is None:
            continue
        cand = (len(cycle), prefixes[f], cycle)
        if best is None or cand < best:
            best = cand
    return Lasso(best[1], best[2])


def is_empty(ba: Ba) -> bool:
    return not (_good_states(ba, _reachable(ba)) & ba.accepting)


def contains(a: Ba, b: Ba, budget: Optional[Budget] = None) -> Optional[Lasso]:
    """``None`` if L(a) ⊆ L(b), otherwise a stream in L(a) \\ L(b)."""
    comp = complement(b, budget)
    return emptiness(intersect(a, comp, budget))


# -- exchange format ------------------------------------------------------

def to_hoa(ba: Ba, name="automaton") -> str:
    """Render in the Hanoi Omega-Automata text format.

    Each action becomes an atomic proposition; an edge label is the cube
    with exactly that proposition true.
    """
    letters = list(ba.alphabet)
    k = len(letters)
    lines = [
        "HOA: v1",
        f'name: "{name}"',
        f"States: {ba.n}",
        f"Start: {ba.initial}",
        f"AP: {k} " + " ".join(f'"{a}"' for a in letters),
        "acc-name: Buchi",
        "Acceptance: 1 Inf(0)",
        "properties: state-acc",
        "--BODY--",
    ]
    for q in range(ba.n):
        mark = " {0}" if q in ba.accepting else ""
        label = f' "{ba.names[q]}"' if ba.names else ""
        lines.append(f"State: {q}{label}{mark}")
        for i, a in enumerate(letters):
            cube = "&".join(str(j) if j == i else f"!{j}" for j in range(k))
            for r in ba.successors(q, a):
                lines.append(f"[{cube}] {r}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"
