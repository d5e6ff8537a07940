# Conditional queries on a stored model, from Python and from the shell.
import subprocess
import sys
from pathlib import Path

from compmeasure import load_model, query_conditional, compose_chain
from compmeasure.oracle import oracle_joint, oracle_conditional

path = Path(__file__).parent / "models" / "chain.json"
model = load_model(path)

print(query_conditional(model, (1, 1)))
print(query_conditional(model, (3, 1), {1: 0}))

# the same number the slow way
print(oracle_conditional(oracle_joint(model.sequence), (3, 1), {1: 0}))

# the full joint, for comparison
print(compose_chain(model.sequence).values.ravel())

out = subprocess.run(
    [sys.executable, "-m", "compmeasure", "query", str(path), "--target", "3=1", "--given", "1=0"],
    capture_output=True, text=True,
)
print(out.stdout.strip())
