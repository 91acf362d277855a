"""Throttle a network interface when the CPU runs hot.

`cpu` is a reflective variable: every read sees the latest sample the
sensor posted. `tcpTxRate` is refractive: writing it drives the actuator.
"""
from pathlib import Path

from rrvars import run, translate
from rrvars.devices import DeviceConfig

DATA = Path(__file__).parent / "data"

source = (DATA / "fig1.rrc").read_text()
devices = DATA / "fig1.devices"

print("--- instrumented source ---")
print(translate(source, DeviceConfig.load(devices).capabilities()))

result = run(source, devices)
print("--- trace ---")
print(result.trace, end="")
print(f"exit {result.exit_code}; actuator writes: {result.actuators}")
