# Composing two small distributions, and watching one fail.
from pathlib import Path

import numpy as np

from compmeasure import (
    VariableTable, make_measure, compose_right, compose_left, marginalize, DominanceViolation,
)
from compmeasure.fixtures import dominance_counterexample

MODELS = Path(__file__).parent / "models"

u = VariableTable({1: 2, 2: 2, 3: 2})
p = make_measure((1, 2), [0.1, 0.2, 0.3, 0.4], u)
q = make_measure((2, 3), [0.1, 0.4, 0.2, 0.3], u)

# right composition keeps p intact and borrows the conditional of x3 given x2 from q
pq = compose_right(p, q)
print(pq.scope)
print(pq.values)
print(marginalize(pq, (1, 2)).values)   # same as p

# the left one keeps q instead
qp = compose_left(p, q)
print(marginalize(qp, (2, 3)).values)   # same as q

# when the shared marginals disagree the two directions give different joints
print(np.abs(pq.values - qp.values).max())

# a pair where p puts mass on x2=0 but q does not: undefined
_, p_bad, q_bad = dominance_counterexample()
try:
    compose_right(p_bad, q_bad)
except DominanceViolation as exc:
    print("undefined, witness", exc.witness)
