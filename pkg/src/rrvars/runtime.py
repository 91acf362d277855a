"""Runtime wiring: cell store, registry, devices, Server and the redundancy manager."""
from dataclasses import dataclass
from typing import List, Optional

from . import trace as tr
from .devices import (
    ActuatorLog, DeviceTable, EventQueue, Server, Watch, call_actuator, redundance_device,
)
from .errors import IntegrityFailure, StartupError, TickBudgetExceeded
from .redundancy import DEFAULT_EPSILON, RedundancyManager, inject_faults
from .registry import DEFAULT_BANKS, DEFAULT_CELLS, CellStore, Registry
from .translator import REDUNDANCE
from .values import Kind, TypeCode

DEFAULT_MAX_TICKS = 10000


class Runtime:
    """Everything a running RRC program talks to besides its own plain globals.

    Time is a logical tick counter. Each tick: inject scheduled faults, poll
    the sensors bound to registered variables, then let the Server apply the
    queued updates. With ``concurrent=True`` the Server is a thread and the
    tick waits for it to empty the queue; otherwise the queue is drained
    inline.
    """

    def __init__(self, devices=(), faults=None, cells=DEFAULT_CELLS, banks=DEFAULT_BANKS,
                 epsilon=DEFAULT_EPSILON, max_ticks=DEFAULT_MAX_TICKS, concurrent=False,
                 adaptive=True, degree=3):
        self.tick = 0
        self.max_ticks = max_ticks
        self.faults = faults
        self.concurrent = concurrent
        self.trace = tr.TraceLog(clock=lambda: self.tick)
        self.store = CellStore(cells, banks)
        self.registry = Registry()
        self.queue = EventQueue()
        self.actuators = ActuatorLog()
        self.devices = DeviceTable()
        for spec in devices:
            self.devices.register_device(spec)
        if REDUNDANCE not in self.devices:
            self.devices.register_device(redundance_device())
        self.last_vote = {}
        self.redundancy = RedundancyManager(
            self.registry, self.store, degree=degree, adaptive=adaptive, epsilon=epsilon,
            on_change=self._degree_changed, on_vote=self._voted)
        self.server = Server(self.queue, self.registry, self.store, self.redundancy, self.trace,
                             clock=lambda: self.tick)
        self.spawned = False
        self._bound = []

    def register_device(self, spec):
        return self.devices.register_device(spec)

    # hooks

    def _degree_changed(self, degree):
        if self.registry.lookup(REDUNDANCE) is not None:
            self.devices[REDUNDANCE].post(degree)
        else:
            self.trace.emit(tr.REDUNDANCE, REDUNDANCE, degree)

    def _voted(self, name, result):
        self.last_vote[name] = result
        shown = "TIE" if result.tie else result.value
        self.trace.emit(tr.VOTE, name, f"{shown} majority={result.majority_count} dissent={result.dissent}")

    # prologue operations

    def aopen(self, name):
        return self.registry.aopen(name)

    def register_variable(self, name, type_code, kinds, init=None):
        """Allocate storage for an RR var and enter it into ``reflex``."""
        kinds = frozenset(kinds)
        dev = self.devices.get(name)
        if (Kind.REFLECTIVE in kinds or Kind.REFRACTIVE in kinds) and dev is None:
            raise StartupError(f"no device named {name!r}")
        desc = self.store.allocate(name, type_code, kinds, self.redundancy.new_degree(kinds),
                                   device=name if dev is not None else None)
        if init is not None:
            for slot in desc.slots:
                self.store.cell_write(slot, type_code.coerce(init))
        if name == REDUNDANCE and init is None:
            for slot in desc.slots:
                self.store.cell_write(slot, self.redundancy.state.ideal_degree)
        self.registry.reflex.awrite(name, desc)
        if dev is not None and dev.spec.is_sensor and Kind.REFLECTIVE in kinds:
            self._bound.append(dev)
            if init is not None and name != REDUNDANCE:
                self.server.watches[name] = Watch(name, type_code.coerce(init), dev.spec.on_match)
        return desc

    def register_type(self, name, type_code):
        self.registry.rtype.awrite(name, TypeCode(type_code))

    def spawn_server(self):
        if not self.registry.coherent():
            raise StartupError("reflex and rtype disagree; registration incomplete")
        for name, desc in self.registry.reflex.items():
            if self.registry.rtype.aread(name) is not desc.type_code:
                raise StartupError(f"rtype of {name!r} does not match its declaration")
        # poll in device registration order so traces do not depend on declaration order
        order = list(self.devices.devices)
        self._bound.sort(key=lambda d: order.index(d.name))
        self.spawned = True
        if self.concurrent:
            self.server.start()

    # time

    def advance_one(self):
        if self.tick >= self.max_ticks:
            raise TickBudgetExceeded(f"tick budget of {self.max_ticks} exhausted")
        self.tick += 1
        if self.faults is not None:
            notes = []
            for cell, old, new in inject_faults(self.store, self.faults, self.tick, notes):
                self.trace.note("fault", f"cell={cell} {old}->{new}")
            for n in notes:
                self.trace.note("fault", n)
        if not self.spawned:
            return
        for dev in self._bound:
            event = dev.get_value(self.tick)
            if event is not None:
                self.queue.put(event)
        if self.concurrent:
            self.queue.join()
        else:
            self.server.drain()

    def advance(self, n=1):
        for _ in range(n):
            self.advance_one()

    def close(self):
        self.server.stop()

    # variable access for non-redundant RR vars

    def read(self, name):
        desc = self.registry.descriptor(name)
        if desc.redundant:
            return self.redundancy.redundant_read(name)
        return self.store.cell_read(desc.slots[0])

    def write(self, name, value):
        desc = self.registry.descriptor(name)
        if desc.redundant:
            self.redundancy.redundant_assign(name, value)
        else:
            self.store.cell_write(desc.slots[0], desc.type_code.coerce(value))

    def call_v(self, name):
        value = self.store.cell_read(self.registry.descriptor(name).slots[0])
        call_actuator(self.devices, name, value, self.actuators, self.tick, self.trace)


@dataclass
class SimStep:
    read: int
    degree: int
    written: int
    value: Optional[int]
    dissent: int
    tie: bool
    redundance: Optional[int]

    @property
    def recovered(self):
        return self.value == self.written


@dataclass
class SimResult:
    steps: List[SimStep]
    trace: str
    layout: List[int]


def simulate(degree=3, faults=None, reads=100, adaptive=False, cells=DEFAULT_CELLS,
             banks=DEFAULT_BANKS, epsilon=DEFAULT_EPSILON, variable="x"):
    """Redundancy-only experiment: write, let faults strike, read back, ``reads`` times.

    Read ``i`` happens at tick ``i`` and writes the value ``i``. The runtime
    registers ``redundance`` first and then `variable`; `variable`'s initial
    cell numbers are returned as ``layout`` and noted at tick 0 so scripted
    scenarios can target them. Ties are recorded instead of aborting.
    """
    rt = Runtime(faults=faults, cells=cells, banks=banks, epsilon=epsilon,
                 max_ticks=reads, adaptive=adaptive, degree=degree)
    rt.aopen("reflex")
    rt.aopen("rtype")
    rt.register_variable(REDUNDANCE, TypeCode.INT, {Kind.REFLECTIVE, Kind.REDUNDANT})
    rt.register_type(REDUNDANCE, TypeCode.INT)
    desc = rt.register_variable(variable, TypeCode.INT, {Kind.REDUNDANT})
    rt.register_type(variable, TypeCode.INT)
    rt.spawn_server()
    layout = list(desc.slots)
    rt.trace.note("layout", f"{variable}=" + ",".join(map(str, layout)))
    steps = []
    for i in range(1, reads + 1):
        rt.redundancy.redundant_assign(variable, i)
        rt.advance_one()
        deg = desc.degree
        try:
            value = rt.redundancy.redundant_read(variable)
        except IntegrityFailure:
            value = None
        result = rt.last_vote[variable]
        try:
            red = rt.redundancy.redundant_read(REDUNDANCE)
        except IntegrityFailure:
            red = None
        steps.append(SimStep(i, deg, i, value, result.dissent, result.tie, red))
    rt.close()
    return SimResult(steps, rt.trace.text(), layout)
