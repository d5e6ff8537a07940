import numpy as np
import pytest

from compmeasure import (
    DominanceViolation,
    UndefinedSubexpression,
    VariableTable,
    anticipate,
    compose_chain,
    compose_left,
    compose_right,
    equal,
    make_measure,
    marginalize,
)
from compmeasure.fixtures import dominance_counterexample, random_measure, random_universe
from compmeasure.measure import Measure, max_diff, product
from compmeasure.oracle import oracle_compose, oracle_joint


def test_counterexample_is_undefined_both_ways():
    _, p, q = dominance_counterexample()
    with pytest.raises(DominanceViolation) as right:
        compose_right(p, q)
    assert right.value.scope == (2,)
    assert right.value.witness.as_dict() == {2: 0}
    with pytest.raises(DominanceViolation) as left:
        compose_left(p, q)
    assert left.value.witness.as_dict() == {2: 1}


def test_counterexample_products_all_vanish():
    _, p, q = dominance_counterexample()
    prod = p.values[:, :, None] * q.values[None, :, :]
    assert not prod.any()


def test_right_composition_cells(u2, qd):
    r = compose_right(u2, qd)
    assert r.scope == (1, 2, 3)
    np.testing.assert_allclose(r.table, [0.15, 0.10, 0.05, 0.20] * 2, atol=1e-15)


def test_left_equals_right_when_marginals_agree(u2, qd):
    assert equal(compose_left(u2, qd), compose_right(u2, qd), 1e-15)


def test_disjoint_scopes_give_product():
    universe = VariableTable({1: 2, 2: 3})
    a = make_measure((1,), [0.25, 0.75], universe)
    b = make_measure((2,), [0.2, 0.3, 0.5], universe)
    assert equal(compose_right(a, b), product(a, b), 0)
    assert equal(compose_left(a, b), product(a, b), 0)


def test_same_scope(qd):
    assert equal(compose_left(qd, qd), qd, 1e-15)
    assert equal(compose_right(qd, qd), qd, 1e-15)


def test_zero_over_zero_is_zero():
    universe = VariableTable({1: 2, 2: 2})
    p = make_measure((1, 2), [0.5, 0.5, 0.0, 0.0], universe)
    q = make_measure((1,), [1.0, 0.0], universe)
    r = compose_right(p, q)
    assert r.table.tolist() == [0.5, 0.5, 0.0, 0.0]


def test_right_keeps_left_marginal_and_left_keeps_right(rng):
    universe = random_universe(rng, 4)
    for _ in range(20):
        p = random_measure(rng, (1, 2, 3), universe)
        q = random_measure(rng, (2, 4), universe)
        assert equal(marginalize(compose_right(p, q), p.scope), p, 1e-12)
        assert equal(marginalize(compose_left(p, q), q.scope), q, 1e-12)


def test_anticipate_reductions(rng):
    universe = random_universe(rng, 4)
    p2 = random_measure(rng, (2, 3), universe)
    p3 = random_measure(rng, (1, 3), universe)
    # K2 covers K1 & K3
    assert equal(anticipate(p2, p3, (3, 4)), compose_right(p2, p3), 1e-15)
    # K1 & K3 empty
    assert equal(anticipate(p2, p3, (2, 4)), compose_right(p2, p3), 1e-15)


def test_anticipate_regroups_chain(rng):
    universe = random_universe(rng, 3)
    for _ in range(20):
        p1 = random_measure(rng, (1, 2), universe)
        p2 = random_measure(rng, (2, 3), universe)
        p3 = random_measure(rng, (1, 3), universe)
        lhs = compose_chain([p1, p2, p3])
        a = anticipate(p2, p3, p1.scope)
        assert max_diff(lhs, compose_right(p1, a)) <= 1e-9
        assert max_diff(lhs, compose_left(a, p1)) <= 1e-9
        assert max_diff(lhs, oracle_joint([p1, a])) <= 1e-9


def test_chain_single_measure(qd):
    assert compose_chain([qd]) is qd


def test_chain_matches_oracle(chain):
    ref = oracle_joint(chain)
    assert max_diff(compose_chain(chain), ref) <= 1e-12


def test_chain_reports_failing_step():
    _, p, q = dominance_counterexample()
    with pytest.raises(UndefinedSubexpression) as exc:
        compose_chain([p, q, q])
    assert exc.value.step == 1
    assert exc.value.witness.as_dict() == {2: 0}
    with pytest.raises(UndefinedSubexpression) as exc:
        compose_chain([p, p, q], ["right", "left"])
    assert exc.value.step == 2


def test_chain_operator_count(chain):
    with pytest.raises(ValueError):
        compose_chain(chain, ["right"])
    with pytest.raises(ValueError):
        compose_chain([])


def test_conflicting_cardinalities_rejected():
    a = Measure((1,), (2,), [0.5, 0.5])
    b = Measure((1,), (3,), [0.2, 0.3, 0.5])
    with pytest.raises(ValueError):
        compose_right(a, b)


def test_lemma2_counterexample():
    universe = VariableTable({1: 2, 2: 2, 3: 2})
    p = make_measure((1, 2), [0.45, 0.05, 0.05, 0.45], universe)
    q = make_measure((2, 3), [0.45, 0.05, 0.05, 0.45], universe)
    joint = compose_right(p, q)
    lhs = marginalize(joint, (1, 3))
    rhs = compose_right(marginalize(p, (1,)), marginalize(q, (3,)))
    assert max_diff(lhs, rhs) > 1e-6
    # with M covering K & L the identity holds
    m = (2, 3)
    assert max_diff(marginalize(joint, m), compose_right(marginalize(p, (2,)), q)) <= 1e-12


def test_oracle_agrees_on_failures():
    _, p, q = dominance_counterexample()
    for direction, fn in (("right", compose_right), ("left", compose_left)):
        with pytest.raises(DominanceViolation) as a:
            fn(p, q)
        with pytest.raises(DominanceViolation) as b:
            oracle_compose(p, q, direction)
        assert a.value.witness == b.value.witness
