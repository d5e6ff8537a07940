# Sequences, perfectness, and the regrouping rules.
import numpy as np

from compmeasure import (
    VariableTable, compose_chain, is_perfect, perfectize, has_rip, kellerer_sufficient,
    marginalize, applicable_exchange_rules,
)
from compmeasure.fixtures import random_measure

rng = np.random.default_rng(7)
u = VariableTable({1: 2, 2: 3, 3: 2, 4: 2})

seq = [random_measure(rng, s, u) for s in [(1, 2), (2, 3), (3, 4)]]
print(is_perfect(seq))

fixed = perfectize(seq)
print(is_perfect(fixed))
print(np.abs(compose_chain(fixed).values - compose_chain(seq).values).max())

# marginals of one joint along a running-intersection chain are perfect for free
joint = random_measure(rng, (1, 2, 3, 4), u)
margs = [marginalize(joint, s) for s in [(1, 2), (2, 3), (3, 4)]]
print(has_rip([m.scope for m in margs]), kellerer_sufficient(margs), is_perfect(margs))

# a cycle of pairwise marginals does not get that guarantee
cyc = [marginalize(joint, s) for s in [(1, 2), (2, 3), (1, 3)]]
print(has_rip([m.scope for m in cyc]), kellerer_sufficient(cyc))

# which reorderings does a triple license?
triple = [random_measure(rng, s, u) for s in [(1, 2, 3), (2, 4), (3,)]]
for rule in sorted(applicable_exchange_rules(*triple), key=lambda r: r.tag):
    print(rule.tag, rule.identity)
