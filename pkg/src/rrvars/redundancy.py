"""Voted storage for redundant variables, fault injection, and the Redundance controller."""
import math
import random
import threading
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import ConfigError, IntegrityFailure, LookupMiss, TypeMismatch
from .values import Kind, TypeCode, parse_literal

WINDOW = 16
ALPHA = 0.25
DEFAULT_EPSILON = 1e-9


@dataclass(frozen=True)
class VoteResult:
    value: object
    majority_count: int
    dissent: int
    tie: bool


def vote(values, epsilon=DEFAULT_EPSILON):
    """Majority vote by grouping equal values; floats group within `epsilon`."""
    if not values:
        raise ValueError("vote needs at least one value")
    reps, counts = [], []
    for v in values:
        for i, r in enumerate(reps):
            if v == r or (isinstance(v, float) and isinstance(r, float) and abs(v - r) <= epsilon):
                counts[i] += 1
                break
        else:
            reps.append(v)
            counts.append(1)
    best = max(range(len(reps)), key=counts.__getitem__)
    n = len(values)
    majority = counts[best]
    if 2 * majority > n:
        return VoteResult(reps[best], majority, n - majority, False)
    return VoteResult(None, majority, n - majority, True)


# Redundance controller

def degree_for(f_hat):
    """Smallest odd degree voting out ``ceil(f_hat)`` faults, clamped to [3, 9]."""
    return min(9, max(3, 2 * math.ceil(f_hat) + 1))


@dataclass(frozen=True)
class RedundanceState:
    window: Tuple[int, ...] = ()
    f_hat: float = 0.0
    ideal_degree: int = 3


def controller_step(state, dissent):
    if dissent < 0:
        raise ValueError("dissent must be non-negative")
    window = (state.window + (dissent,))[-WINDOW:]
    f_hat = (1 - ALPHA) * state.f_hat + ALPHA * max(window)
    return RedundanceState(window, f_hat, degree_for(f_hat))


# fault injection

BERNOULLI = "bernoulli"
BURST = "burst"
SCRIPTED = "scripted"


@dataclass(frozen=True)
class FaultScenario:
    seed: int = 0
    mode: str = BERNOULLI
    p: float = 0.0
    start: int = 0
    length: int = 0
    tick: int = 0
    script: Tuple[Tuple[int, int, object], ...] = ()

    @classmethod
    def bernoulli(cls, p, seed=0):
        return cls(seed=seed, mode=BERNOULLI, p=p)

    @classmethod
    def burst(cls, start, length, tick, seed=0):
        return cls(seed=seed, mode=BURST, start=start, length=length, tick=tick)

    @classmethod
    def scripted(cls, entries, seed=0):
        return cls(seed=seed, mode=SCRIPTED, script=tuple(tuple(e) for e in entries))

    @classmethod
    def parse(cls, text):
        """Read the line-oriented scenario format (``seed=``, ``mode=``, ``at T cell N value V``)."""
        seed, mode, opts, script = 0, None, {}, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            words = line.split()
            try:
                if words[0] == "at":
                    if len(words) != 6 or words[2] != "cell" or words[4] != "value":
                        raise ValueError(line)
                    script.append((int(words[1]), int(words[3]), parse_literal(words[5])))
                    continue
                for w in words:
                    key, _, val = w.partition("=")
                    if key == "seed":
                        seed = int(val)
                    elif key == "mode":
                        mode = val
                    else:
                        opts[key] = val
            except ValueError:
                raise ConfigError(f"fault scenario line {lineno}: cannot parse {raw!r}") from None
        if script and mode in (None, SCRIPTED):
            return cls.scripted(script, seed)
        if mode == BERNOULLI:
            return cls.bernoulli(float(opts.get("p", 0.0)), seed)
        if mode == BURST:
            try:
                return cls.burst(int(opts["start"]), int(opts["len"]), int(opts.get("tick", 0)), seed)
            except KeyError as e:
                raise ConfigError(f"burst scenario needs {e.args[0]}=") from None
        if mode is None:
            return cls(seed=seed)
        raise ConfigError(f"unknown fault mode {mode!r}")

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.parse(f.read())


def corrupt_value(value):
    """Deterministic corruption: ints complement, floats flip sign and shift, strings change first char."""
    if isinstance(value, str):
        if not value:
            return "?"
        return chr(ord(value[0]) ^ 1) + value[1:]
    if isinstance(value, float):
        new = -value + 1.0
        return new if new != value else value + 1.0
    return ~value


def inject_faults(store, scenario, tick, notes=None):
    """Corrupt cells of `store` as `scenario` dictates at `tick`; return ``[(cell, old, new)]``.

    Bernoulli draws come from a generator seeded by ``(seed, tick)``, so the
    fault sequence is reproducible and independent of how often this is called.
    """
    log = []

    def hit(cell, new=None):
        if not 0 <= cell < store.capacity:
            if notes is not None:
                notes.append(f"skipped out-of-range cell {cell}")
            return
        t = store.types[cell]
        if t is None:
            return
        old = store.values[cell]
        if new is None:
            new = corrupt_value(old)
        elif not t.accepts(new):
            if notes is not None:
                notes.append(f"skipped cell {cell}: {new!r} does not fit {t.keyword}")
            return
        store.values[cell] = t.coerce(new)
        log.append((cell, old, store.values[cell]))

    if scenario.mode == BERNOULLI:
        if scenario.p > 0:
            rng = random.Random(scenario.seed * 1_000_003 + tick)
            for cell in store.allocated():
                if rng.random() < scenario.p:
                    hit(cell)
    elif scenario.mode == BURST:
        if tick == scenario.tick:
            for cell in range(scenario.start, scenario.start + scenario.length):
                hit(cell)
    elif scenario.mode == SCRIPTED:
        for at, cell, value in scenario.script:
            if at == tick:
                hit(cell, value)
    return log


class RedundancyManager:
    """Redundant writes and voted reads over a registry + cell store.

    With ``adaptive=True`` the replication degree follows the controller's
    ideal degree, applied on the next write. With ``adaptive=False`` every
    redundant variable keeps ``degree``; the controller still observes.
    """

    def __init__(self, registry, store, degree=3, adaptive=True, epsilon=DEFAULT_EPSILON,
                 on_change=None, on_vote=None):
        self.registry = registry
        self.store = store
        self.fixed_degree = degree
        self.adaptive = adaptive
        self.epsilon = epsilon
        self.state = RedundanceState()
        self.on_change = on_change
        self.on_vote = on_vote
        self._lock = threading.RLock()

    @property
    def target_degree(self):
        return self.state.ideal_degree if self.adaptive else self.fixed_degree

    def _redundant(self, name):
        desc = self.registry.descriptor(name)
        if not desc.redundant:
            raise LookupMiss(f"{name!r} is not a redundant variable")
        return desc

    def observe(self, dissent):
        before = self.state.ideal_degree
        self.state = controller_step(self.state, dissent)
        if self.state.ideal_degree != before and self.on_change is not None:
            self.on_change(self.state.ideal_degree)

    def redundant_assign(self, name, value):
        with self._lock:
            desc = self._redundant(name)
            if not desc.type_code.accepts(value):
                raise TypeMismatch(f"{name!r} holds {desc.type_code.keyword}, got {type(value).__name__}")
            if desc.degree != self.target_degree:
                self.store.resize(desc, self.target_degree)
            for slot in desc.slots:
                self.store.cell_write(slot, value)

    def redundant_read(self, name):
        with self._lock:
            desc = self._redundant(name)
            values = [self.store.cell_read(s) for s in desc.slots]
            result = vote(values, self.epsilon if desc.type_code is TypeCode.FLOAT else 0.0)
            if self.on_vote is not None:
                self.on_vote(name, result)
            self.observe(result.dissent)
            if result.tie:
                raise IntegrityFailure(name, result)
            if result.dissent:
                for slot, v in zip(desc.slots, values):
                    if v != result.value:
                        self.store.cell_write(slot, result.value)
            return result.value

    def new_degree(self, kinds):
        return self.target_degree if Kind.REDUNDANT in kinds else 1
