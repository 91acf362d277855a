"""Simulated devices, the sensor event queue, the actuator log and the Server loop."""
import collections
import logging
import os
import random
import threading
from dataclasses import dataclass, field
from typing import Optional, Tuple

from . import trace as tr
from .errors import ConfigError, DuplicateDevice, NotAnActuator
from .translator import ACTUATOR, REDUNDANCE, SENSOR
from .values import TypeCode, parse_literal

log = logging.getLogger(__name__)

QUEUE_CAPACITY = 1024
DEFAULT_CALLBACK = "beep"

TRACE = "trace"
SYNTH = "synth"
RAMP = "ramp"
INTERNAL = "internal"


@dataclass(frozen=True)
class DeviceSpec:
    name: str
    capabilities: frozenset
    source: Optional[Tuple] = None  # (TRACE, path) | (SYNTH, values) | (RAMP, seed) | (INTERNAL,)
    period: int = 1
    on_match: str = DEFAULT_CALLBACK

    def __post_init__(self):
        if SENSOR in self.capabilities and self.source is None:
            raise ConfigError(f"sensor {self.name!r} needs a source")
        if self.period < 1:
            raise ConfigError(f"device {self.name!r}: period must be >= 1")

    @property
    def is_sensor(self):
        return SENSOR in self.capabilities

    @property
    def is_actuator(self):
        return ACTUATOR in self.capabilities


@dataclass(frozen=True)
class DeviceEvent:
    device: str
    value: object
    tick: int


def read_trace_file(path):
    values = []
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            values.append(line.strip())
    return values


def ramp_values(seed, count=1000):
    """Deterministic CPU-like ramp in [0, 100]."""
    rng = random.Random(seed)
    start, step = rng.randint(0, 100), rng.randint(1, 10)
    return [(start + k * step) % 101 for k in range(count)]


def host_cpu_percent():
    """Busy share of the host CPU since boot, read from /proc/stat (Linux only)."""
    with open("/proc/stat") as f:
        fields = [int(x) for x in f.readline().split()[1:]]
    idle = fields[3] + (fields[4] if len(fields) > 4 else 0)
    total = sum(fields)
    return round(100 * (total - idle) / total) if total else 0


class Device:
    """Runtime state of one registered device."""

    def __init__(self, spec):
        self.spec = spec
        self.name = spec.name
        self.pending = collections.deque()
        kind = spec.source[0] if spec.source else None
        if kind == TRACE:
            self._values = iter(read_trace_file(spec.source[1]))
        elif kind == SYNTH:
            self._values = iter(spec.source[1])
        elif kind == RAMP:
            self._values = iter(ramp_values(spec.source[1]))
        else:
            self._values = None

    def post(self, value):
        """Queue a value for emission at the next tick (internal devices)."""
        self.pending.append(value)

    def get_value(self, tick):
        """Next reading if `tick` falls on this sensor's period, else None."""
        if not self.spec.is_sensor or tick % self.spec.period:
            return None
        if self.spec.source[0] == INTERNAL:
            if self.pending:
                return DeviceEvent(self.name, self.pending.popleft(), tick)
            if self.name == "cpu":
                return DeviceEvent(self.name, host_cpu_percent(), tick)
            return None
        value = next(self._values, None)
        if value is None:
            return None
        return DeviceEvent(self.name, value, tick)


def get_value(device, tick):
    return device.get_value(tick)


class DeviceTable:
    def __init__(self):
        self.devices = {}

    def register_device(self, spec):
        if spec.name in self.devices:
            raise DuplicateDevice(f"device {spec.name!r} already registered")
        self.devices[spec.name] = Device(spec)
        return self.devices[spec.name]

    def __contains__(self, name):
        return name in self.devices

    def __getitem__(self, name):
        return self.devices[name]

    def get(self, name):
        return self.devices.get(name)

    def capabilities(self):
        return {n: d.spec.capabilities for n, d in self.devices.items()}


class EventQueue:
    """Bounded FIFO of DeviceEvents shared by device producers and the Server.

    When full, the oldest queued event of the incoming event's device is
    dropped (fresh values replace stale ones); if that device has nothing
    queued, the oldest event overall is dropped.
    """

    def __init__(self, capacity=QUEUE_CAPACITY):
        self.capacity = capacity
        self._items = collections.deque()
        self._cond = threading.Condition()
        self._unfinished = 0
        self.dropped = 0

    def __len__(self):
        return len(self._items)

    def put(self, event):
        with self._cond:
            if len(self._items) >= self.capacity:
                victim = next((e for e in self._items if e.device == event.device), self._items[0])
                self._items.remove(victim)
                self._unfinished -= 1
                self.dropped += 1
            self._items.append(event)
            self._unfinished += 1
            self._cond.notify_all()

    def get(self, block=False, timeout=None):
        with self._cond:
            if block:
                self._cond.wait_for(lambda: self._items, timeout)
            if not self._items:
                return None
            return self._items.popleft()

    def task_done(self):
        with self._cond:
            self._unfinished -= 1
            self._cond.notify_all()

    def join(self):
        with self._cond:
            self._cond.wait_for(lambda: self._unfinished <= 0)

    def wake(self):
        with self._cond:
            self._cond.notify_all()


class ActuatorLog:
    def __init__(self):
        self.entries = []

    def append(self, tick, device, value):
        if self.entries and tick < self.entries[-1][0]:
            raise ValueError("actuator log is ordered by tick")
        self.entries.append((tick, device, value))

    def for_device(self, name):
        return [e for e in self.entries if e[1] == name]

    def __len__(self):
        return len(self.entries)


def call_actuator(devices, name, value, log, tick, trace=None):
    """Forward a refractive write to its actuator; the runtime body of ``__call_v``."""
    dev = devices.get(name)
    if dev is None or not dev.spec.is_actuator:
        raise NotAnActuator(f"{name!r} is not bound to an actuator")
    log.append(tick, name, value)
    if trace is not None:
        trace.emit(tr.ACT, name, value, tick)


@dataclass
class Watch:
    variable: str
    value: object
    callback: str


class Server:
    """Consumes sensor events and stores each value into its bound variable.

    ``step`` is one iteration of: wait for an update, resolve the variable
    through ``reflex`` and ``rtype``, write the value. Errors never reach the
    program; they become NOTE records.
    """

    def __init__(self, queue, registry, store, redundancy, trace, clock=lambda: 0):
        self.queue = queue
        self.registry = registry
        self.store = store
        self.redundancy = redundancy
        self.trace = trace
        self.clock = clock
        self.watches = {}
        self.fired = []
        self._fired_lock = threading.Lock()
        self._thread = None
        self._stop = threading.Event()

    def step(self, block=False, timeout=None):
        event = self.queue.get(block=block, timeout=timeout)
        if event is None:
            return False
        try:
            self.apply(event)
        except Exception as exc:  # server totality: nothing propagates into the program
            self.trace.note("server", f"{event.device}: {exc}")
        finally:
            self.queue.task_done()
        return True

    def apply(self, event):
        desc = self.registry.lookup(event.device)
        if desc is None:
            self.trace.note("server", f"unknown device {event.device}")
            return
        type_code = self.registry.type_of(event.device)
        value = event.value
        if isinstance(value, str):
            value = type_code.parse(value)
        elif type_code is TypeCode.STRING:
            value = str(value)
        elif type_code.accepts(value):
            value = type_code.coerce(value)
        else:
            raise ValueError(f"{value!r} does not fit {type_code.keyword}")
        if desc.redundant:
            self.redundancy.redundant_assign(event.device, value)
        else:
            self.store.cell_write(desc.slots[0], value)
        kind = tr.REDUNDANCE if event.device == REDUNDANCE else tr.SENSE
        self.trace.emit(kind, event.device, value, self.clock())
        watch = self.watches.get(event.device)
        if watch is not None and value == watch.value:
            with self._fired_lock:
                self.fired.append((watch, self.clock()))

    def drain(self):
        while self.step():
            pass

    def take_fired(self):
        with self._fired_lock:
            fired, self.fired = self.fired, []
        return fired

    # free-running schedule

    def start(self):
        self._stop.clear()
        self._thread = threading.Thread(target=self._loop, name="rr-server", daemon=True)
        self._thread.start()

    def _loop(self):
        while not self._stop.is_set():
            self.step(block=True, timeout=0.05)

    def stop(self):
        if self._thread is not None:
            self._stop.set()
            self.queue.wake()
            self._thread.join()
            self._thread = None

    @property
    def running(self):
        return self._thread is not None


# device configuration file

def _parse_caps(text, lineno):
    caps = {"sensor": {SENSOR}, "actuator": {ACTUATOR}, "both": {SENSOR, ACTUATOR}}.get(text)
    if caps is None:
        raise ConfigError(f"device config line {lineno}: caps must be sensor, actuator or both")
    return frozenset(caps)


def _parse_source(text, base_dir, lineno):
    kind, _, rest = text.partition(":")
    if kind == TRACE:
        path = rest if os.path.isabs(rest) else os.path.join(base_dir, rest)
        return (TRACE, path)
    if kind == SYNTH:
        if rest.startswith("ramp/"):
            return (RAMP, int(rest[5:]))
        return (SYNTH, tuple(v.strip() for v in rest.split(",") if v.strip()))
    if kind == INTERNAL:
        return (INTERNAL,)
    raise ConfigError(f"device config line {lineno}: unknown source {text!r}")


@dataclass
class DeviceConfig:
    devices: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    def capabilities(self):
        caps = {d.name: d.capabilities for d in self.devices}
        caps.setdefault(REDUNDANCE, frozenset({SENSOR}))
        return caps

    @classmethod
    def parse(cls, text, base_dir="."):
        """Parse ``device <name> caps=.. src=.. period=..`` lines plus ``key=value`` settings."""
        cfg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            words = line.split()
            if words[0] != "device":
                for w in words:
                    key, eq, val = w.partition("=")
                    if not eq:
                        raise ConfigError(f"device config line {lineno}: cannot parse {raw!r}")
                    cfg.settings[key] = parse_literal(val)
                continue
            if len(words) < 2:
                raise ConfigError(f"device config line {lineno}: missing device name")
            opts = {}
            for w in words[2:]:
                key, eq, val = w.partition("=")
                if not eq:
                    raise ConfigError(f"device config line {lineno}: expected key=value, got {w!r}")
                opts[key] = val
            caps = _parse_caps(opts.get("caps", "sensor"), lineno)
            source = _parse_source(opts["src"], base_dir, lineno) if "src" in opts else None
            try:
                period = int(opts.get("period", 1))
            except ValueError:
                raise ConfigError(f"device config line {lineno}: bad period") from None
            cfg.devices.append(DeviceSpec(words[1], caps, source, period,
                                          opts.get("on_match", DEFAULT_CALLBACK)))
        return cfg

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.parse(f.read(), os.path.dirname(os.path.abspath(path)))


def cpu_sensor(values=None, seed=None, period=1):
    """Builtin cpu device: an explicit list of readings or a seeded ramp."""
    source = (SYNTH, tuple(values)) if values is not None else (RAMP, seed or 0)
    return DeviceSpec("cpu", frozenset({SENSOR}), source, period)


def tcp_tx_rate(initial=None, period=1):
    source = (SYNTH, (initial,) if initial is not None else ())
    return DeviceSpec("tcpTxRate", frozenset({SENSOR, ACTUATOR}), source, period)


def rfid_reader(path=None, tags=None, period=1, on_match=DEFAULT_CALLBACK):
    source = (TRACE, path) if path is not None else (SYNTH, tuple(tags or ()))
    return DeviceSpec("rfid", frozenset({SENSOR}), source, period, on_match)


def redundance_device():
    return DeviceSpec(REDUNDANCE, frozenset({SENSOR}), (INTERNAL,), 1)
