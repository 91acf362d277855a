"""Watch the replication degree follow the observed fault rate.

Two replicas of `x` are corrupted on every read from 20 to 59.
The controller raises the degree to 5 and, once the faults stop,
relaxes it back to 3. The two reads before it widens are ties at degree 3.
"""
from rrvars.redundancy import FaultScenario
from rrvars.runtime import simulate

layout = simulate(reads=1).layout
script = [(t, cell, v) for t in range(20, 60) for cell, v in zip(layout[:2], (-1, -2))]
result = simulate(reads=100, adaptive=True, faults=FaultScenario.scripted(script))

previous = None
for step in result.steps:
    if step.redundance != previous:
        print(f"read {step.read:3d}: redundance={step.redundance}")
        previous = step.redundance
print(f"unrecovered reads: {sum(not s.recovered for s in result.steps)}")
