"""Beep when a shelf reader sees the book we are looking for.

The reader replays 100 tags; the wanted ISBN shows up once.
The initializer on `rfid` turns the variable into a watch, so the
`beep` function runs the moment a matching sample arrives.
"""
from pathlib import Path

from rrvars import run
from rrvars.trace import parse_trace

DATA = Path(__file__).parent / "data"

result = run((DATA / "fig8.rrc").read_text(), DATA / "fig8.devices")
print(result.output, end="")
for tick, kind, name, value in parse_trace(result.trace):
    if kind == "NOTE":
        print(f"tick {tick}: {name} ({value})")
