# Pushing a perfect sequence onto a decomposable covering, one row at a time.
import numpy as np

from compmeasure import (
    VariableTable, perfectize, run_procedure, final_row, final_joint, compose_chain,
    verify_prefix_consistency,
)
from compmeasure.fixtures import random_measure

rng = np.random.default_rng(11)
u = VariableTable({1: 2, 2: 2, 3: 3, 4: 2, 5: 2})

raw = [random_measure(rng, s, u) for s in [(1,), (1, 2), (2, 3), (3, 4), (3, 5)]]
seq = perfectize(raw)
covering = [(1, 2), (2, 3), (3, 4), (3, 5)]

state = run_procedure(seq, covering)
print(state.buckets)
for upd in state.trace[:6]:
    print(upd.target, upd.operation, upd.sources)

report = verify_prefix_consistency(state, seq)
print(report.passed, len(report.cells))

for m in final_row(state):
    print(m.scope, np.round(m.table, 4))

print(np.abs(final_joint(state).values - compose_chain(seq).values).max())

# only the last two rows are needed if we throw the rest away as we go
lean = run_procedure(seq, covering, low_memory=True)
print(sum(row is None for row in lean.grid))
