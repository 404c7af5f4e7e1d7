import pytest
from hypothesis import given
from hypothesis import strategies as st

from featsub.model import (
    BiRegionCatalogue,
    BiRegionSubscription,
    Catalogue,
    InconsistentError,
    MalformedError,
    Region,
    Relaxation,
    Subscription,
    anti_subscription,
    complete,
    is_consistent,
    partial_completion,
    reformulate,
    relaxation_of,
    transitive_closure,
    transpose,
    value_of,
    verify_relaxation,
)
from featsub.oracle import brute_force_consistency, brute_force_optimal, has_cycle

from .conftest import subscriptions


def reach(rel, universe):
    """Floyd-Warshall reachability, kept deliberately naive."""
    u = sorted(universe)
    r = {(i, j): (i, j) in rel for i in u for j in u}
    for k in u:
        for i in u:
            for j in u:
                if r[(i, k)] and r[(k, j)]:
                    r[(i, j)] = True
    return {p for p, v in r.items() if v}


def worked():
    return Subscription.build({1, 2, 3, 4}, {(1, 2), (3, 4)})


# -- closure ---------------------------------------------------------------

def test_closure_of_chain():
    assert transitive_closure({(1, 2), (2, 3)}, {1, 2, 3}) == (frozenset({(1, 2), (2, 3), (1, 3)}), False)


def test_closure_empty():
    assert transitive_closure(set(), {1, 2}) == (frozenset(), False)


def test_closure_two_cycle_sets_flag():
    closure, cycle = transitive_closure({(1, 2), (2, 1)}, {1, 2})
    assert closure == {(1, 2), (2, 1)} and cycle
    assert (1, 1) in reach({(1, 2), (2, 1)}, {1, 2})


rels = st.sets(st.tuples(st.integers(1, 6), st.integers(1, 6)).filter(lambda p: p[0] != p[1]), max_size=14)


@given(rels)
def test_closure_matches_reachability(rel):
    u = range(1, 7)
    closure, cycle = transitive_closure(rel, u)
    r = reach(rel, u)
    assert closure == {(i, j) for i, j in r if i != j}
    assert cycle == any((i, i) in r for i in u)


@given(rels)
def test_closure_idempotent(rel):
    c1, _ = transitive_closure(rel, range(1, 7))
    assert transitive_closure(c1, range(1, 7))[0] == c1


@given(rels, rels)
def test_closure_monotone(r, s):
    assert transitive_closure(r, range(1, 7))[0] <= transitive_closure(r | s, range(1, 7))[0]


# -- consistency and completion -----------------------------------------------

def test_worked_instance_consistent():
    assert is_consistent(worked())[0]


def test_two_cycle_inconsistent():
    assert not is_consistent(Subscription.build({1, 2}, {(1, 2), (2, 1)}))[0]


def test_empty_subscription_consistent():
    assert is_consistent(Subscription(Catalogue(3), frozenset())) == (True, [])


@given(subscriptions(max_features=7, max_user=8))
def test_is_consistent_agrees_with_permutations(sub):
    ok, order = is_consistent(sub)
    assert ok == brute_force_consistency(sub)
    assert ok != has_cycle(sub.features, sub.hard | sub.user)
    if ok:
        pos = {f: k for k, f in enumerate(order)}
        assert sorted(order) == sorted(sub.features)
        assert all(pos[i] < pos[j] for i, j in sub.hard | sub.user)


def test_complete_smallest_id_tie_break():
    assert complete(worked()) == [1, 2, 3, 4]
    assert complete(Subscription.build({5})) == [5]
    assert complete(Subscription.build({1, 2}, {(2, 1)})) == [2, 1]


def test_complete_rejects_cycle():
    with pytest.raises(InconsistentError):
        complete(Subscription.build({1, 2}, {(1, 2), (2, 1)}))


@given(subscriptions(max_features=7, max_user=6))
def test_complete_extends_all_precedences(sub):
    if not is_consistent(sub)[0]:
        return
    order = complete(sub)
    pos = {f: k for k, f in enumerate(order)}
    assert all(pos[i] < pos[j] for i, j in sub.hard | sub.user)


def test_partial_completion():
    sub = Subscription.build({1, 2, 3}, {(1, 2)}, {(2, 3)})
    assert partial_completion(sub) == {(1, 2), (2, 3), (1, 3)}
    assert partial_completion(Subscription.build({1, 2})) == frozenset()
    assert partial_completion(worked()) == {(1, 2), (3, 4)}


# -- anti-subscription ----------------------------------------------------------

def probe(sub, extra_feature=None, extra_prec=None):
    feats = set(sub.features) | ({extra_feature} if extra_feature else set())
    hard = {p for p in sub.catalogue.hard if p[0] in feats and p[1] in feats}
    rel = hard | sub.user | ({extra_prec} if extra_prec else set())
    return not has_cycle(feats, rel)


def test_anti_subscription_blocks_reverse_of_hard():
    anti = anti_subscription(Subscription.build({1, 2}, {(1, 2)}))
    assert anti.precs == {(2, 1)} and anti.features == frozenset()


def test_anti_subscription_catalogue_cycle():
    cat = Catalogue(3, frozenset({(1, 2), (2, 3), (3, 1)}))
    assert anti_subscription(Subscription(cat, frozenset({1, 2}))).features == {3}


def test_anti_subscription_empty_catalogue():
    anti = anti_subscription(Subscription(Catalogue(2), frozenset({1, 2})))
    assert anti.features == frozenset() and anti.precs == frozenset()


def test_anti_subscription_can_include_implied():
    anti = anti_subscription(Subscription.build({1, 2}, {(1, 2)}), exclude_implied=False)
    assert anti.precs == {(2, 1)}


@given(subscriptions(max_features=6, max_user=5))
def test_anti_subscription_members_match_probe(sub):
    if not is_consistent(sub)[0]:
        with pytest.raises(InconsistentError):
            anti_subscription(sub)
        return
    anti = anti_subscription(sub)
    implied = partial_completion(sub)
    for f in sub.catalogue.features - sub.features:
        assert (f in anti.features) == (not probe(sub, extra_feature=f))
    for i in sub.features:
        for j in sub.features:
            if i != j and (i, j) not in implied:
                assert ((i, j) in anti.precs) == (not probe(sub, extra_prec=(i, j)))


# -- reformulation -----------------------------------------------------------

def test_reformulate_worked_example():
    bi = BiRegionSubscription(Region(frozenset({1, 2, 3}), frozenset({(1, 2)})),
                              Region(frozenset({2, 3, 4}), frozenset({(4, 3)})))
    sub = reformulate(bi)
    assert sub.features == {1, 2, 3, 4}
    assert sub.hard == {(1, 2), (3, 4)}
    assert sub.user == frozenset()


def test_reformulate_source_only_is_identity():
    bi = BiRegionSubscription(Region(frozenset({1, 2}), frozenset({(1, 2)}), frozenset()),
                              Region(frozenset()))
    sub = reformulate(bi)
    assert (sub.features, sub.hard) == ({1, 2}, {(1, 2)})


def test_reformulate_transposes_target():
    bi = BiRegionSubscription(Region(frozenset()), Region(frozenset({1, 2}), frozenset({(1, 2)})))
    assert reformulate(bi).hard == {(2, 1)}


def test_reversible_feature_missing_is_malformed():
    with pytest.raises(MalformedError):
        BiRegionSubscription(Region(frozenset({1})), Region(frozenset({2})),
                             catalogue=BiRegionCatalogue(frozenset({1, 2}), frozenset({2})))


# -- value and verification ---------------------------------------------------------

def test_value_of_sums_weights():
    sub = Subscription.build({1, 2}, user={(1, 2)}, feature_weight={1: 3, 2: 2}, prec_weight={(1, 2): 4})
    assert value_of(Relaxation(frozenset({1, 2}), frozenset({(1, 2)})), sub) == 9
    assert value_of(Relaxation(frozenset()), sub) == 0
    assert value_of(Relaxation(sub.features, sub.user), sub) == sub.total_weight


def test_value_of_dangling_reference():
    sub = Subscription.build({1, 2})
    with pytest.raises(MalformedError):
        value_of(Relaxation(frozenset({3})), sub)


def test_verify_whole_and_mutex():
    sub = Subscription.build({1, 2}, {(1, 2), (2, 1)})
    assert verify_relaxation(sub, Relaxation(frozenset({1}))) == (True, 1)
    ok, why = verify_relaxation(sub, Relaxation(frozenset({1, 2})))
    assert not ok and "inconsistent" in why
    good = Subscription.build({1, 2}, {(1, 2)}, {(1, 2)})
    assert verify_relaxation(good, Relaxation(good.features, good.user)) == (True, good.total_weight)


def test_verify_reports_first_violation():
    sub = Subscription.build({1, 2}, user={(1, 2)})
    assert not verify_relaxation(sub, Relaxation(frozenset({1, 3})))[0]
    ok, why = verify_relaxation(sub, Relaxation(frozenset({1}), frozenset({(1, 2)})))
    assert not ok and "dropped" in why


@given(subscriptions(max_features=6, max_user=5))
def test_oracle_relaxation_verifies(sub):
    value, relax = brute_force_optimal(sub)
    assert verify_relaxation(sub, relax) == (True, value)
    assert relaxation_of(sub, relax.features, relax.precs).value == value


def test_transpose():
    assert transpose({(1, 2), (3, 1)}) == {(2, 1), (1, 3)}


def test_subscription_rejects_bad_weights():
    with pytest.raises(MalformedError):
        Subscription.build({1}, feature_weight={1: 0})
    with pytest.raises(MalformedError):
        Subscription.build({1, 2}, user={(1, 1)})
