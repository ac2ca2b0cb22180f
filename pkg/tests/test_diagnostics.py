from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from softcomp.cas import identity_cas
from softcomp.diagnostics import (
    diagnostic_preference, excludes_at, find_suspect, innocence, is_suspect,
    minimal_suspects_brute_force, suspects, threshold_bound_holds,
)
from softcomp.errors import DomainError, PreconditionError
from softcomp.lasso import Lasso
from softcomp.sca import Sca
from softcomp.semiring import INF, WEIGHTED, ProductSemiring

from randomgen import random_behaviour, random_lasso, seeded

PAIR = ProductSemiring(WEIGHTED, WEIGHTED)
AB = ("a", "b")


def unrolled_d(sca, sigma, steps):
    """glb of the per-step sums over the first ``steps`` positions, by plain simulation."""
    sr = sca.semiring
    current = {sca.initial}
    values = []
    for n in range(steps):
        moves = [t for q in sorted(current) for t in sca.outgoing(q) if t.action == sigma[n]]
        values.append(sr.big_sum(t.pref for t in moves))
        current = {t.target for t in moves}
    return sr.glb(values)


def random_sca(rng, n, semiring=WEIGHTED):
    c = identity_cas(AB)
    states = tuple(f"p{i}" for i in range(n))
    weight = (lambda: rng.randint(0, 6)) if semiring is WEIGHTED else \
        (lambda: (rng.randint(0, 4), rng.randint(0, 4)))
    transitions = [(q, a, weight(), r) for q in states for a in AB for r in states
                   if rng.random() < 0.35]
    return Sca(states, states[0], c, semiring, transitions, semiring.one)


# -- diagnostic preference ----------------------------------------------------

def test_drone_value(drone, a_es):
    trace = diagnostic_preference(a_es, drone.lasso("sigma_d"))
    assert trace.value == 7
    assert not trace.collapsed
    # thresholds do not enter
    assert diagnostic_preference(a_es.with_threshold(0), drone.lasso("sigma_d")).value == 7


def test_caveat_value(caveat):
    a = caveat.automaton("A")
    assert diagnostic_preference(a, caveat.lasso("sigma")).value == (2, 2)


def test_single_loop():
    c = identity_cas(["a"])
    one = Sca(("p",), "p", c, WEIGHTED, [("p", "a", 3, "p")], 0)
    trace = diagnostic_preference(one, Lasso([], ["a"]))
    assert trace.value == 3
    assert trace.state_sets == [frozenset({"p"})] and trace.loop_start == 0


def test_trace_shape(drone, a_es):
    trace = diagnostic_preference(a_es, drone.lasso("sigma_d"))
    assert trace.state_sets[0] == {"q4,qN"}
    assert len(trace.state_sets) == len(trace.pref_sums)
    assert trace.value == WEIGHTED.glb(trace.pref_sums)


def test_leaving_the_automaton_collapses_to_zero(a_e):
    trace = diagnostic_preference(a_e, Lasso([], ["charge"]))
    assert trace.collapsed and trace.value == INF
    assert diagnostic_preference(a_e, ["charge"]).value == INF


def test_finite_words(a_e):
    assert diagnostic_preference(a_e, []).value == 0
    assert diagnostic_preference(a_e, ["discharge2", "charge"]).value == 5
    with pytest.raises(DomainError):
        diagnostic_preference(a_e, ["fly"])


def test_unrolled_simulation_agrees():
    rng = seeded(41)
    for semiring in (WEIGHTED, PAIR):
        for _ in range(150):
            a = random_sca(rng, rng.randint(1, 4), semiring)
            sigma = random_lasso(rng, AB)
            horizon = (2 ** len(a.states)) * len(sigma) + 1
            assert diagnostic_preference(a, sigma).value == unrolled_d(a, sigma, horizon)


# -- threshold bound ------------------------------------------------------------

def test_bound_example(drone, a_es):
    a11 = a_es.with_threshold(11)
    sigma = drone.lasso("sigma_d")
    assert a11.accepts(sigma)
    assert threshold_bound_holds(a11, sigma)
    assert WEIGHTED.plus(11, 7) == 7


def test_bound_on_accepted_streams(a_es, caveat, cas):
    rng = seeded(42)
    systems = [a_es.with_threshold(t) for t in (INF, 11, 7, 5)] + [caveat.automaton("A")]
    accepted = 0
    while accepted < 200:
        a = rng.choice(systems)
        sigma = random_behaviour(rng, a) or random_lasso(rng, a.cas.actions)
        if a.accepts(sigma):
            accepted += 1
            assert threshold_bound_holds(a, sigma)


def test_prefix_monotonicity(a_es, cas):
    rng = seeded(43)
    for _ in range(100):
        sigma = random_behaviour(rng, a_es) or random_lasso(rng, cas.actions)
        d = diagnostic_preference(a_es, sigma).value
        for k in range(0, 12):
            assert WEIGHTED.leq(d, diagnostic_preference(a_es, sigma.take(k)).value)


def test_caveat_exclusions(caveat):
    a = caveat.automaton("A")
    sigma = caveat.lasso("sigma")
    assert excludes_at(a, (1, 1), sigma)
    assert excludes_at(a, (3, 3), sigma)
    assert PAIR.leq((3, 3), (2, 2))
    assert not PAIR.leq((1, 1), (2, 2))
    assert not excludes_at(a, (4, 4), sigma)


def test_raising_threshold_excludes_counterexample(drone, a_es):
    sigma = drone.lasso("phi_w_cex")
    a7 = a_es.with_threshold(7)
    assert not excludes_at(a7, 7, sigma)
    assert excludes_at(a7, 5, sigma)
    assert excludes_at(a7, "5", sigma)


def test_zero_threshold_excludes_nothing_more(drone, a_es):
    zero = a_es.with_threshold(INF)
    for name in ("phi_w_cex", "sigma_d", "tau"):
        sigma = drone.lasso(name)
        assert excludes_at(zero, INF, sigma) == (not zero.accepts(sigma))


# -- suspects -------------------------------------------------------------------

T_DRONE = {"e": 10, "s": 1}


def test_suspect_examples():
    assert is_suspect({"e"}, T_DRONE, 7, WEIGHTED)
    assert not is_suspect({"s"}, T_DRONE, 7, WEIGHTED)
    assert is_suspect({"e", "s"}, T_DRONE, 7, WEIGHTED)
    assert not is_suspect(set(), T_DRONE, 7, WEIGHTED)
    assert is_suspect(set(), T_DRONE, 0, WEIGHTED)


def test_find_suspect_examples():
    assert find_suspect(["e", "s"], T_DRONE, 7, WEIGHTED) == [{"e"}]
    assert find_suspect(["e"], {"e": 10}, 7, WEIGHTED) == [{"e"}]
    assert find_suspect([1, 2, 3], {1: 4, 2: 0, 3: 9}, 0, WEIGHTED) == [{1}, {2}, {3}]
    with pytest.raises(PreconditionError):
        find_suspect(["e", "s"], {"e": 1, "s": 1}, 7, WEIGHTED)
    with pytest.raises(DomainError):
        find_suspect(["e", "x"], T_DRONE, 7, WEIGHTED)


def test_innocence_examples():
    labels = ["e", "s"]
    assert innocence({"s"}, labels, T_DRONE, 7, WEIGHTED)
    assert not innocence({"e"}, labels, T_DRONE, 7, WEIGHTED)
    assert innocence(set(), labels, T_DRONE, 7, WEIGHTED)


def test_suspects_of_composed_drone(drone, a_es):
    result = suspects(a_es, drone.lasso("sigma_d"), thresholds=[10, 1])
    assert result.d == 7
    assert result.minimal == [{"e"}]
    assert result.innocent == ["s"]
    assert result.to_json(WEIGHTED) == {
        "labels": ["e", "s"], "thresholds": {"e": 10, "s": 1}, "d": 7,
        "minimal_suspects": [["e"]], "innocent": ["s"]}


def random_element(rng, semiring):
    w = lambda: rng.choice([0, 1, 2, 3, 5, 8, INF, Fraction(1, 2)])  # noqa: E731
    return w() if semiring is WEIGHTED else (w(), w())


@pytest.mark.parametrize("semiring", [WEIGHTED, PAIR], ids=["weighted", "pair"])
def test_find_suspect_matches_brute_force(semiring):
    rng = seeded(44)
    agreed = 0
    for _ in range(400):
        labels = list(range(rng.randint(1, 6)))
        thresholds = {i: random_element(rng, semiring) for i in labels}
        d = random_element(rng, semiring)
        if d != semiring.one and not is_suspect(labels, thresholds, d, semiring):
            with pytest.raises(PreconditionError):
                find_suspect(labels, thresholds, d, semiring)
            continue
        got = find_suspect(labels, thresholds, d, semiring)
        if d == semiring.one:
            assert got == [{i} for i in labels]
            continue
        assert got == minimal_suspects_brute_force(labels, thresholds, d, semiring)
        agreed += 1
    assert agreed > 50


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=6), st.integers(0, 12))
def test_minimal_family_invariants(values, d):
    labels = list(range(len(values)))
    thresholds = dict(zip(labels, values))
    if d == 0 or not is_suspect(labels, thresholds, d, WEIGHTED):
        return
    family = find_suspect(labels, thresholds, d, WEIGHTED)
    for m in family:
        assert is_suspect(m, thresholds, d, WEIGHTED)
        assert not any(is_suspect(m - {i}, thresholds, d, WEIGHTED) for i in m)
    # every suspect subset contains a listed one
    for mask in range(1 << len(labels)):
        subset = {i for i in labels if mask >> i & 1}
        if is_suspect(subset, thresholds, d, WEIGHTED):
            assert any(m <= subset for m in family)
