import pytest

from compmeasure import (
    Covering,
    NoBucket,
    NotDecomposable,
    VariableTable,
    assign_buckets,
    compose_chain,
    final_joint,
    final_row,
    is_perfect,
    kellerer_sufficient,
    marginalize,
    run_procedure,
    verify_prefix_consistency,
)
from compmeasure.fixtures import random_measure, rip_orderings_exhaustive
from compmeasure.measure import Measure, consistent, max_diff
from compmeasure.sequence import RipOrdering, rip_witnesses

import builders


def test_assign_buckets():
    cov = [(1, 2), (2, 3)]
    assert assign_buckets([(1, 2), (2, 3)], cov) == (0, 1)
    assert assign_buckets([(2,)], cov) == (0,)
    assert assign_buckets([(2,)], cov, tie_break="largest") == (1,)
    with pytest.raises(NoBucket) as exc:
        assign_buckets([(1, 2), (1, 3)], cov)
    assert exc.value.index == 1


def test_single_measure_rows(rng):
    u = VariableTable({1: 2, 2: 3, 3: 2})
    p = random_measure(rng, (1, 2), u)
    cov = [(1, 2), (2, 3), (3,)]
    state = run_procedure([p], cov)
    for j, L in enumerate(cov):
        assert max_diff(state.grid[0][j], marginalize(p, set(L) & {1, 2})) == 0
    assert state.grid[0][2].scope == ()
    assert verify_prefix_consistency(state, [p]).passed
    assert len(verify_prefix_consistency(state, [p]).cells) == 3


def test_two_clique_chain(rng):
    u = VariableTable({1: 2, 2: 2, 3: 3})
    joint = random_measure(rng, (1, 2, 3), u)
    seq = [marginalize(joint, (1, 2)), marginalize(joint, (2, 3))]
    state = run_procedure(seq, [(1, 2), (2, 3)])
    row = final_row(state)
    assert max_diff(row[0], marginalize(joint, (1, 2))) <= 1e-12
    assert max_diff(row[1], marginalize(joint, (2, 3))) <= 1e-12


def test_three_measures_two_sets(rng):
    u = VariableTable({1: 2, 2: 3, 3: 2})
    raw = [random_measure(rng, s, u) for s in [(1,), (1, 2), (2, 3)]]
    from compmeasure import perfectize

    seq = perfectize(raw)
    state = run_procedure(seq, [(1, 2), (2, 3)])
    report = verify_prefix_consistency(state, seq)
    assert report.passed and len(report.cells) == 6
    assert max_diff(final_joint(state), compose_chain(seq)) <= 1e-9


def test_trivial_covering_absorbs_everything(rng):
    seq, _ = builders.perfect_sequence_on_covering(rng)
    cov = [tuple(sorted(set().union(*(m.scope for m in seq))))]
    state = run_procedure(seq, cov)
    assert len(final_row(state)) == 1
    assert max_diff(final_row(state)[0], compose_chain(seq)) <= 1e-9


def test_perturbed_cell_is_flagged(rng):
    seq, cov = builders.perfect_sequence_on_covering(rng, m=3, n=3)
    state = run_procedure(seq, cov)
    r = state.grid[-1][0]
    bumped = r.values.copy().reshape(-1)
    bumped[0] += 1e-3
    bumped[-1] -= 1e-3
    state.grid[-1][0] = Measure(r.scope, r.cards, bumped)
    report = verify_prefix_consistency(state, seq)
    assert [(c.i, c.j) for c in report.failures] == [(len(seq) - 1, 0)]
    assert report.failures[0].max_deviation == pytest.approx(1e-3, rel=1e-6)
    assert report.to_dict()["passed"] is False


def test_rejects_bad_inputs(rng):
    u = VariableTable({1: 2, 2: 2, 3: 2})
    seq = [random_measure(rng, (1, 2), u)]
    with pytest.raises(NotDecomposable):
        run_procedure(seq, [(1, 2), (2, 3), (1, 3)])
    with pytest.raises(NoBucket):
        run_procedure([random_measure(rng, (1, 3), u)], [(1, 2), (2, 3)])
    p1 = random_measure(rng, (1, 2), u)
    p2 = random_measure(rng, (2, 3), u)
    if not is_perfect([p1, p2]):
        with pytest.raises(ValueError):
            run_procedure([p1, p2], [(1, 2), (2, 3)])
        run_procedure([p1, p2], [(1, 2), (2, 3)], check_perfect=False)


def test_updates_read_only_previous_row_and_witness(rng):
    for _ in range(30):
        seq, cov = builders.perfect_sequence_on_covering(rng)
        state = run_procedure(seq, cov)
        for i in range(1, len(seq)):
            ordering = state.orderings[i]
            written = [u for u in state.trace if u.target[0] == i]
            assert [u.target[1] for u in written] == list(ordering.order)
            for k, update in enumerate(written):
                j = update.target[1]
                allowed = {(i - 1, j)}
                if k:
                    allowed.add((i, ordering.parent(k)))
                assert set(update.sources) <= allowed


def test_low_memory_mode_keeps_last_rows(rng):
    seq, cov = builders.perfect_sequence_on_covering(rng, n=4)
    full = run_procedure(seq, cov)
    lean = run_procedure(seq, cov, low_memory=True)
    assert lean.grid[0] is None and lean.grid[1] is None
    for a, b in zip(final_row(full), final_row(lean)):
        assert max_diff(a, b) == 0


def test_final_row_is_consistent_and_perfect(rng):
    for _ in range(40):
        seq, cov = builders.perfect_sequence_on_covering(rng)
        state = run_procedure(seq, cov)
        row = final_row(state)
        for a in row:
            for b in row:
                assert consistent(a, b)
        from compmeasure.sequence import find_rip_ordering

        order = find_rip_ordering(cov).order
        ordered = final_row(state, order)
        assert kellerer_sufficient(ordered)
        assert is_perfect(ordered)
        assert max_diff(compose_chain(ordered), compose_chain(seq)) <= 1e-9


def test_joint_invariant_under_choices(rng):
    for _ in range(40):
        seq, cov = builders.perfect_sequence_on_covering(rng)
        base = final_joint(run_procedure(seq, cov))
        largest = final_joint(run_procedure(seq, cov, tie_break="largest"))
        assert max_diff(base, largest) <= 1e-9

        orders = rip_orderings_exhaustive(cov)

        def last_valid(root):
            order = [o for o in orders if o[0] == root][-1]
            return RipOrdering(order, rip_witnesses(cov, order))

        alt = final_joint(run_procedure(seq, cov, ordering_for=last_valid))
        assert max_diff(base, alt) <= 1e-9

        perm = rng.permutation(len(cov))
        shuffled = final_joint(run_procedure(seq, [cov[i] for i in perm]))
        assert max_diff(base, shuffled) <= 1e-9


def test_covering_type():
    cov = Covering([(2, 1), (3, 2)])
    assert cov.sets == ((1, 2), (2, 3))
    assert cov.variables == (1, 2, 3)
    assert cov.is_decomposable()
    assert not Covering([(1, 2), (2, 3), (1, 3)]).is_decomposable()
    with pytest.raises(ValueError):
        Covering([(1, 2)], universe=(1, 2, 3))
