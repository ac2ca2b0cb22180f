import pytest

from softcomp import buchi
from softcomp.buchi import Aba, Ba, Budget
from softcomp.cas import identity_cas
from softcomp.errors import CapacityError
from softcomp.lasso import Lasso

from randomgen import all_lassos, naive_member, port_cas, random_ba, random_lasso, seeded

AB = ("a", "b")
ABC = ("a", "b", "c")


def L(prefix, cycle):
    return Lasso(list(prefix), list(cycle))


def pointwise_ba(sigma, related, alphabet):
    """Streams tau with related(tau(n), sigma(n)) at every position."""
    letters = list(sigma.letters())
    delta = [{a: (sigma.successor(i),) for a in alphabet if related(a, letters[i])}
             for i in range(len(sigma))]
    return Ba(len(sigma), alphabet, delta, 0, range(len(sigma)))


# -- examples -------------------------------------------------------------

def test_atom():
    a = buchi.atom_ba("a", ABC)
    assert buchi.member(a, L("ab", "b"))
    assert not buchi.member(a, L("", "b"))
    assert buchi.emptiness(buchi.atom_ba("y", ("x", "y"))) == L("y", "x")
    with pytest.raises(ValueError):
        buchi.atom_ba("z", AB)


def test_atom_is_exact_not_capturing(cas):
    assert not buchi.member(buchi.atom_ba("move", cas.actions), L("", ["move2"]))


def test_intersection_examples():
    a, b = buchi.atom_ba("a", AB), buchi.atom_ba("b", AB)
    assert buchi.member(buchi.intersect(a, a), L("", "a"))
    assert buchi.is_empty(buchi.intersect(a, b))


def until_ab():
    return buchi.dealternate(buchi.until_aba(buchi.atom_ba("a", ABC), buchi.atom_ba("b", ABC)))


def test_until_examples():
    u = until_ab()
    assert buchi.member(u, L("aab", "c"))
    assert buchi.member(u, L("b", "c"))
    assert not buchi.member(u, L("", "a"))
    assert not buchi.member(u, L("acb", "c"))


def test_until_automaton_shape():
    a1, a2 = buchi.atom_ba("a", AB), buchi.atom_ba("b", AB)
    aba = buchi.until_aba(a1, a2)
    pivot = aba.initial
    assert aba.n == a1.n + a2.n + 1 and pivot == aba.n - 1
    assert aba.accepting == {1, 3}
    assert aba.delta[pivot]["a"] == [frozenset({1, pivot})]
    assert aba.delta[pivot]["b"] == [frozenset({3})]


def test_next_examples():
    x = buchi.next_ba(buchi.atom_ba("a", ABC))
    assert buchi.member(x, L("ba", "c"))
    assert not buchi.member(x, L("ab", "c"))


def test_complement_examples():
    assert buchi.is_empty(buchi.complement(buchi.universal_ba(AB)))
    assert buchi.emptiness(buchi.complement(buchi.universal_ba(AB))) is None
    comp = buchi.complement(buchi.atom_ba("a", AB))
    for sigma in all_lassos(AB, 4, 4):
        assert buchi.member(comp, sigma) == (sigma[0] != "a")


def test_capture_lift_examples(cas):
    lifted = buchi.capture_lift(buchi.atom_ba("move", cas.actions), cas)
    assert buchi.member(lifted, L("", ["move2"]))
    assert not buchi.member(lifted, L("", ["charge"]))


def test_composable_lift_examples(cas):
    lifted = buchi.composable_lift(buchi.atom_ba("charge", cas.actions), cas)
    assert buchi.member(lifted, L("", ["pass"]))
    assert not buchi.member(lifted, L(["move"], ["pass"]))


def test_lifts_with_identity_preorder_are_identity():
    c = identity_cas(AB)
    rng = seeded(3)
    for _ in range(20):
        a = random_ba(rng, 3, AB)
        for lift in (buchi.capture_lift, buchi.composable_lift):
            lifted = lift(a, c)
            assert lifted.delta == [{k: v for k, v in row.items()} for row in a.delta]


def test_empty_destination_accepts_branch():
    aba = Aba(1, AB, [{"a": [frozenset()]}], 0, [])
    ba = buchi.dealternate(aba)
    assert buchi.member(ba, L("a", "b"))
    assert buchi.member(ba, L("", "a"))
    assert not buchi.member(ba, L("", "b"))


def test_emptiness_examples():
    unreachable = Ba(2, AB, [{"a": (0,)}, {"a": (1,)}], 0, [1])
    assert buchi.emptiness(unreachable) is None
    assert buchi.emptiness(buchi.empty_ba(AB)) is None


def test_containment_examples():
    a = buchi.atom_ba("a", AB)
    top = buchi.universal_ba(AB)
    assert buchi.contains(a, a) is None
    assert buchi.contains(a, top) is None
    cex = buchi.contains(top, a)
    assert cex is not None and cex[0] != "a"


def test_capacity_error_names_stage():
    rng = seeded(11)
    a = random_ba(rng, 4, AB, density=0.6)
    while a.is_deterministic() or not a.accepting:
        a = random_ba(rng, 4, AB, density=0.6)
    with pytest.raises(CapacityError) as err:
        buchi.complement_rank(a, Budget(3))
    assert err.value.stage == "complement"
    with pytest.raises(CapacityError) as err:
        buchi.intersect(buchi.universal_ba(AB), a, Budget(1))
    assert err.value.stage == "intersect"


def test_budget_records_sizes():
    b = Budget()
    buchi.intersect(buchi.atom_ba("a", AB), buchi.atom_ba("a", AB), b)
    assert b.sizes and b.sizes[-1][0] == "intersect"


def test_hoa_export():
    text = buchi.to_hoa(buchi.atom_ba("a", AB), "atom")
    assert text.startswith("HOA: v1\n")
    assert 'AP: 2 "a" "b"' in text
    assert "State: 1 {0}" in text
    assert "[0&!1] 1" in text
    assert text.rstrip().endswith("--END--")


# -- randomized biconditionals ---------------------------------------------

def test_random_intersection():
    rng = seeded(1)
    for _ in range(200):
        a1, a2 = random_ba(rng, rng.randint(1, 3), AB), random_ba(rng, rng.randint(1, 3), AB)
        both = buchi.intersect(a1, a2)
        sigma = random_lasso(rng, AB)
        assert buchi.member(both, sigma) == (naive_member(a1, sigma) and naive_member(a2, sigma))


def test_random_until():
    rng = seeded(2)
    for _ in range(200):
        a1, a2 = random_ba(rng, rng.randint(1, 3), AB), random_ba(rng, rng.randint(1, 3), AB)
        u = buchi.dealternate(buchi.until_aba(a1, a2))
        sigma = random_lasso(rng, AB)
        expected = any(naive_member(a2, sigma.shift(n))
                       and all(naive_member(a1, sigma.shift(k)) for k in range(n))
                       for n in range(len(sigma) + 1))
        assert buchi.member(u, sigma) == expected


def test_random_next():
    rng = seeded(3)
    for _ in range(200):
        a = random_ba(rng, rng.randint(1, 4), AB)
        sigma = random_lasso(rng, AB)
        assert buchi.member(buchi.next_ba(a), sigma) == naive_member(a, sigma.shift(1))


def test_next_five_times_shifts_by_five():
    rng = seeded(4)
    for _ in range(50):
        a = random_ba(rng, 3, AB)
        x5 = a
        for _ in range(5):
            x5 = buchi.next_ba(x5)
        sigma = random_lasso(rng, AB)
        assert buchi.member(x5, sigma) == naive_member(a, sigma.shift(5))


def test_random_complement():
    rng = seeded(5)
    for _ in range(200):
        a = random_ba(rng, rng.randint(1, 4), AB)
        comp = buchi.complement(a)
        for _ in range(10):
            sigma = random_lasso(rng, AB, 6, 6)
            assert buchi.member(comp, sigma) != naive_member(a, sigma)


def test_double_complement():
    rng = seeded(6)
    for _ in range(60):
        a = random_ba(rng, rng.randint(1, 3), AB)
        again = buchi.complement(buchi.complement(a))
        for _ in range(10):
            sigma = random_lasso(rng, AB)
            assert buchi.member(again, sigma) == naive_member(a, sigma)


def test_rank_construction_on_deterministic_input():
    rng = seeded(7)
    checked = 0
    while checked < 50:
        a = random_ba(rng, 3, AB, density=0.3)
        if not a.is_deterministic():
            continue
        checked += 1
        det, rank = buchi.complement_deterministic(a), buchi.complement_rank(a)
        for sigma in all_lassos(AB, 2, 3):
            assert buchi.member(det, sigma) == buchi.member(rank, sigma) != naive_member(a, sigma)


@pytest.mark.parametrize("lift,related", [
    (buchi.capture_lift, lambda c: c.captures),
    (buchi.composable_lift, lambda c: c.composable),
])
def test_random_lifts(lift, related):
    rng = seeded(8)
    for _ in range(100):
        c = port_cas(rng)
        alphabet = c.actions
        a = random_ba(rng, rng.randint(1, 3), alphabet)
        lifted = lift(a, c)
        sigma = random_lasso(rng, alphabet)
        below = pointwise_ba(sigma, related(c), alphabet)
        expected = buchi.emptiness(buchi.intersect(a, below)) is not None
        assert buchi.member(lifted, sigma) == expected


def test_embedded_ba_dealternates_to_same_language():
    rng = seeded(9)
    for _ in range(100):
        a = random_ba(rng, rng.randint(1, 4), AB)
        d = buchi.dealternate(buchi.embed(a))
        sigma = random_lasso(rng, AB)
        assert buchi.member(d, sigma) == naive_member(a, sigma)


def test_emptiness_matches_exhaustive_search():
    rng = seeded(10)
    lassos = all_lassos(AB, 4, 4)
    for _ in range(150):
        a = random_ba(rng, rng.randint(1, 5), AB, density=0.25)
        witness = buchi.emptiness(a)
        found = any(naive_member(a, s) for s in lassos)
        # an n-state automaton accepts a lasso of prefix and cycle at most n if any
        assert (witness is not None) == found
        if witness is not None:
            assert naive_member(a, witness)
            assert buchi.emptiness(a) == witness


def test_reduce_preserves_language():
    rng = seeded(12)
    for _ in range(150):
        a = random_ba(rng, rng.randint(1, 5), AB)
        r = buchi.reduce(a)
        assert r.n <= max(a.n, 1)
        for _ in range(10):
            sigma = random_lasso(rng, AB)
            assert buchi.member(r, sigma) == naive_member(a, sigma)


def test_member_agrees_with_naive_oracle():
    rng = seeded(13)
    for _ in range(300):
        a = random_ba(rng, rng.randint(1, 5), ABC)
        sigma = random_lasso(rng, ABC)
        assert buchi.member(a, sigma) == naive_member(a, sigma)
