import pytest

from compmeasure import VariableTable, make_measure
from compmeasure.errors import UndefinedSubexpression, ZeroEvidence
from compmeasure.fixtures import dominance_counterexample
from compmeasure.oracle import (
    oracle_compose,
    oracle_conditional,
    oracle_joint,
    oracle_marginal,
)

# hand evaluation: P(x1, x2) P(x3 | x2) with P(x3 | x2=0) = (1/2, 1/2), P(x3 | x2=1) = (1/6, 5/6)
CHAIN_JOINT = [0.05, 0.05, 0.2 / 6, 1 / 6, 0.15, 0.15, 0.4 / 6, 1 / 3]


def test_oracle_right_cells(u2, qd):
    assert oracle_compose(u2, qd, "right").table.tolist() == pytest.approx(
        [0.15, 0.10, 0.05, 0.20] * 2, abs=1e-15
    )


def test_oracle_same_scope(qd):
    assert oracle_compose(qd, qd).table.tolist() == pytest.approx(qd.table.tolist(), abs=1e-15)


def test_oracle_undefined():
    _, p, q = dominance_counterexample()
    with pytest.raises(Exception) as exc:
        oracle_compose(p, q, "right")
    assert exc.value.witness.as_dict() == {2: 0}
    with pytest.raises(UndefinedSubexpression) as exc:
        oracle_joint([p, q])
    assert exc.value.step == 1


def test_oracle_joint_chain(chain):
    assert oracle_joint(chain).table.tolist() == pytest.approx(CHAIN_JOINT, abs=1e-15)
    assert oracle_joint(chain[:1]) is chain[0]


def test_oracle_conditional(chain):
    joint = oracle_joint(chain)
    assert oracle_conditional(joint, (3, 1), {1: 0}) == pytest.approx(13 / 18, abs=1e-15)
    assert oracle_conditional(joint, (1, 1)) == pytest.approx(0.7, abs=1e-15)


def test_oracle_conditional_point_mass():
    universe = VariableTable({1: 2, 2: 2})
    point = make_measure((1, 2), [0, 0, 1, 0], universe)
    assert oracle_conditional(point, (2, 0), {1: 1}) == 1.0
    assert oracle_conditional(point, (2, 1), {1: 1}) == 0.0
    with pytest.raises(ZeroEvidence):
        oracle_conditional(point, (2, 1), {1: 0})


def test_oracle_marginal(qd):
    assert oracle_marginal(qd, (2,)).table.tolist() == pytest.approx([0.5, 0.5])
