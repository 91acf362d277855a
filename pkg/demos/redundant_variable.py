"""A redundant counter survives a stream of random memory faults."""
from pathlib import Path

from rrvars import run
from rrvars.redundancy import FaultScenario

DATA = Path(__file__).parent / "data"
source = (DATA / "fig4.rrc").read_text()

for p in (0.0, 0.01, 0.05):
    result = run(source, DATA / "fig4.devices", FaultScenario.bernoulli(p, seed=11))
    votes = [line for line in result.trace.splitlines() if "\tVOTE\t" in line]
    dissenting = sum("dissent=0" not in v for v in votes)
    print(f"p={p:<5} exit={result.exit_code} output={result.output.strip()!r} "
          f"votes={len(votes)} with dissent={dissenting}")
