from itertools import product

import pytest
from hypothesis import given, settings

from featsub.encoders import (
    HARD,
    WeightedClauseSet,
    bit_width,
    check_point,
    decode_relaxation,
    encode_atom,
    encode_binary_value,
    encode_mip,
    encode_symbol_binary,
    encode_symbol_unary,
    encode_unary_value,
    encode_wcsp,
    feasible_positions,
    mip_optimum,
    optimum_cost,
    pb_optimum,
    to_pseudo_boolean,
    unit_propagate,
    wcsp_optimum,
)
from featsub.encoders.pb import objective_value
from featsub.encoders.wcsp import assignment_cost
from featsub.model import Subscription, topological_order, verify_relaxation
from featsub.oracle import brute_force_optimal

from .conftest import subscriptions


def three_mutexes():
    return Subscription.build(range(1, 7), {(1, 2), (2, 1), (3, 4), (4, 3), (5, 6), (6, 5)})


def three_cycle():
    return Subscription.build({1, 2, 3}, user={(1, 2), (2, 3), (3, 1)})


# -- atom ------------------------------------------------------------------------

def test_atom_census_unreduced():
    census = encode_atom(three_mutexes()).census()
    assert census["transitivity"] == 120 and census["asymmetry"] == 15


def test_atom_census_reduced():
    census = encode_atom(three_mutexes(), reduced=True).census()
    assert census.get("transitivity", 0) == 0 and census["asymmetry"] == 3


def test_atom_single_feature():
    wcs = encode_atom(Subscription.build({1}, feature_weight={1: 3}))
    assert wcs.clauses == [(3, (1,))]


@pytest.mark.parametrize("n", [2, 4, 6])
def test_variable_counts(n):
    sub = Subscription.build(range(1, n + 1), user={(1, 2)})
    assert encode_atom(sub).nvars == n + n * (n - 1)
    unary = encode_symbol_unary(sub)
    assert sum(name.startswith("pos_") for name in unary.names) == n * n
    binary = encode_symbol_binary(sub)
    k = {2: 1, 4: 2, 6: 3}[n]
    assert bit_width(n) == k
    assert sum(name.startswith("pos_") for name in binary.names) == n * k


# -- symbol encodings ---------------------------------------------------------------

def test_value_encodings():
    assert encode_unary_value(3, 8) == "11100000"
    assert encode_binary_value(5, 3) == "101"
    assert bit_width(1) == 1


def test_unary_precedence_clauses():
    sub = Subscription.build({1, 2, 3}, user={(1, 2)})
    wcs = encode_symbol_unary(sub)
    v = wcs.index
    x, i, j = v["bp_1_2"], [v[f"pos_1_{k}"] for k in (1, 2, 3)], [v[f"pos_2_{k}"] for k in (1, 2, 3)]
    got = {c for c, kind in zip(wcs.clauses, wcs.kinds) if kind == "precedence"}
    assert got == {(HARD, (-x, -i[2])), (HARD, (-x, j[0])), (HARD, (-x, -i[0], j[1])), (HARD, (-x, -i[1], j[2]))}


def test_binary_one_bit_is_unary_resolvable():
    sub = Subscription.build({1, 2}, user={(1, 2)})
    wcs = encode_symbol_binary(sub)
    v = wcs.index
    ok, a = unit_propagate(wcs.hard_clauses(), [v["bp_1_2"]])
    assert ok and a[v["pos_1_1"]] is False and a[v["pos_2_1"]] is True


@pytest.mark.parametrize("n", [3, 4, 5])
def test_binary_comparator_is_strict_less(n):
    sub = Subscription.build(range(1, n + 1), user={(1, 2)})
    wcs = encode_symbol_binary(sub)
    v = wcs.index
    k = bit_width(n)
    for a, b in product(range(1 << k), repeat=2):
        bits = [v[f"pos_1_{m}"] if (a >> (k - m)) & 1 else -v[f"pos_1_{m}"] for m in range(1, k + 1)]
        bits += [v[f"pos_2_{m}"] if (b >> (k - m)) & 1 else -v[f"pos_2_{m}"] for m in range(1, k + 1)]
        ok, _ = unit_propagate(wcs.hard_clauses(), bits + [v["bp_1_2"]])
        assert ok == (a < b)


# -- unit propagation ---------------------------------------------------------------

def cycle_assumptions(wcs):
    v = wcs.index
    return [v["bp_1_2"], v["bp_2_3"], v["bp_3_1"]]


def test_atom_detects_cycle_by_propagation():
    wcs = encode_atom(three_cycle())
    ok, _ = unit_propagate(wcs.hard_clauses(), cycle_assumptions(wcs))
    assert not ok


def test_binary_misses_cycle_by_propagation():
    wcs = encode_symbol_binary(three_cycle())
    ok, _ = unit_propagate(wcs.hard_clauses(), cycle_assumptions(wcs))
    assert ok


def test_propagation_noop():
    assert unit_propagate([(1, 2), (-1, 3)], []) == (True, {})


# -- WCSP ---------------------------------------------------------------------------

def test_wcsp_k_and_tables():
    sub = Subscription.build({1, 2}, {(1, 2)}, {(1, 2)})
    model = encode_wcsp(sub)
    assert model.k == 3
    hard = next(t for i, j, t, label in model.binary if label.startswith("H"))
    assert hard[0][2] == 0 and hard[2][1] == model.k
    assert all(0 <= c <= model.k for _, _, t, _ in model.binary for row in t for c in row)


def test_wcsp_excluded_feature_disables_hard():
    sub = Subscription.build(range(1, 6), {(1, 2)})
    hard = encode_wcsp(sub).binary[0][2]
    assert hard[0][5] == 0


# -- MIP ----------------------------------------------------------------------------

def test_mip_big_m():
    sub = Subscription.build(range(1, 31), {(1, 2), (3, 4)})
    m = encode_mip(sub)
    assert all(rhs == 59 for label, _, rhs in m.constraints if label.startswith("h_"))


def test_mip_no_constraints_optimum_total():
    sub = Subscription.build({1, 2}, feature_weight={1: 2, 2: 3})
    m = encode_mip(sub)
    assert m.constraints == []
    assert mip_optimum(m)[0] == 5


def oracle_point(sub, relax, model):
    """Binary values and integer positions built from a topological sort of the kept part."""
    order = topological_order(relax.features, {p for p in sub.hard if p[0] in relax.features
                                               and p[1] in relax.features} | relax.precs)
    pos = {f: k + 1 for k, f in enumerate(order)}
    vals = {f"bf_{f}": int(f in relax.features) for f in sub.features}
    vals.update({f"bp_{i}_{j}": int((i, j) in relax.precs) for i, j in sub.user})
    vals.update({f"pf_{f}": pos.get(f, 1) for f in sub.features})
    return vals


@settings(max_examples=40)
@given(subscriptions(max_features=6, max_user=4))
def test_oracle_point_is_mip_feasible(sub):
    value, relax = brute_force_optimal(sub)
    model = encode_mip(sub)
    point = oracle_point(sub, relax, model)
    assert check_point(model, point)
    assert sum(c * point[v] for v, c in model.objective.items()) == value
    assert feasible_positions(model, {k: v for k, v in point.items() if not k.startswith("pf_")}) is not None


# -- PB -----------------------------------------------------------------------------

def test_pb_clause_normalisation():
    wcs = WeightedClauseSet()
    x, y = wcs.var("x"), wcs.var("y")
    wcs.add(HARD, (x, -y))
    wcs.add(3, (x,), "soft")
    pb = to_pseudo_boolean(wcs)
    # x + (1 - y) >= 1  is  x - y >= 0
    assert pb.constraints == [(((-1, y), (1, x)), 0)]
    # 3 * (1 - x)
    assert pb.objective == [(-3, x)] and pb.offset == 3
    assert objective_value(pb, {x: 0}) == 3 and objective_value(pb, {x: 1}) == 0


# -- exhaustive optimum equivalence ---------------------------------------------------

@settings(max_examples=25)
@given(subscriptions(max_features=5, max_user=4))
def test_encoding_optima_match_oracle(sub):
    value, _ = brute_force_optimal(sub)
    expected = sub.total_weight - value
    atom = encode_atom(sub)
    assert optimum_cost(atom)[0] == expected
    assert optimum_cost(encode_atom(sub, reduced=True))[0] == expected
    assert optimum_cost(encode_symbol_unary(sub))[0] == expected
    assert optimum_cost(encode_symbol_binary(sub))[0] == expected
    assert wcsp_optimum(encode_wcsp(sub))[0] == expected
    assert pb_optimum(to_pseudo_boolean(atom))[0] == expected
    assert mip_optimum(encode_mip(sub))[0] == value


@settings(max_examples=25)
@given(subscriptions(max_features=5, max_user=4))
def test_decoded_optimum_is_oracle_optimal(sub):
    value, _ = brute_force_optimal(sub)
    wcs = encode_atom(sub, reduced=True)
    cost, model = optimum_cost(wcs)
    relax = decode_relaxation(wcs, model, sub)
    assert verify_relaxation(sub, relax) == (True, value)
    assert cost == sub.total_weight - value


def test_decode_all_true_and_all_false():
    sub = Subscription.build({1, 2}, {(1, 2)}, {(1, 2)})
    wcs = encode_atom(sub, reduced=True)
    everything = {v: True for v in range(1, wcs.nvars + 1)}
    assert decode_relaxation(wcs, everything, sub).value == sub.total_weight
    nothing = {v: False for v in range(1, wcs.nvars + 1)}
    assert decode_relaxation(wcs, nothing, sub).value == 0


def test_decode_rejects_violated_hard_clause():
    sub = Subscription.build({1, 2}, {(1, 2)})
    wcs = encode_atom(sub)
    bad = {v: True for v in range(1, wcs.nvars + 1)}  # both bp_1_2 and bp_2_1
    with pytest.raises(ValueError):
        decode_relaxation(wcs, bad, sub)


def test_wcsp_assignment_cost_caps_at_k():
    sub = Subscription.build({1, 2}, {(1, 2), (2, 1)})
    model = encode_wcsp(sub)
    assert assignment_cost(model, (1, 2)) == model.k
    assert assignment_cost(model, (0, 0)) == model.k == 2
    assert assignment_cost(model, (1, 0)) == 1


def test_clause_set_invariants():
    wcs = WeightedClauseSet()
    wcs.var("a")
    with pytest.raises(ValueError):
        wcs.add(HARD, ())
    with pytest.raises(ValueError):
        wcs.add(HARD, (2,))
    wcs.add(4, (1,), "soft")
    assert wcs.top > wcs.soft_total
