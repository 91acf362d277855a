"""Associative arrays ``reflex``/``rtype`` and the bank-striped cell store."""
import bisect
import functools
import heapq
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import DuplicateOpen, InvalidDegree, LookupMiss, OutOfCells, RegistryError, TypeMismatch
from .values import Kind, TypeCode

MIN_DEGREE = 3
MAX_DEGREE = 9
DEFAULT_CELLS = 4096
DEFAULT_BANKS = 8
ASSOC_NAMES = ("reflex", "rtype")


def strcmp(a, b):
    return (a > b) - (a < b)


class AssocArray:
    """Map whose keys enumerate in the order defined by a strcmp-like comparator."""

    def __init__(self, name, comparator=strcmp):
        self.name = name
        self._key = functools.cmp_to_key(comparator)
        self._keys = []
        self._values = {}

    def awrite(self, key, value):
        if key not in self._values:
            bisect.insort(self._keys, key, key=self._key)
        self._values[key] = value

    def aread(self, key):
        try:
            return self._values[key]
        except KeyError:
            raise LookupMiss(f"{self.name}: no entry for {key!r}") from None

    def __contains__(self, key):
        return key in self._values

    def __len__(self):
        return len(self._keys)

    def keys(self):
        return list(self._keys)

    def items(self):
        return [(k, self._values[k]) for k in self._keys]


def awrite(assoc, key, value):
    assoc.awrite(key, value)


def aread(assoc, key):
    return assoc.aread(key)


@dataclass
class VarDescriptor:
    name: str
    type_code: TypeCode
    kinds: frozenset
    slots: List[int]
    base_bank: int = 0
    device: Optional[str] = None

    @property
    def degree(self):
        return len(self.slots)

    @property
    def redundant(self):
        return Kind.REDUNDANT in self.kinds


class Registry:
    def __init__(self):
        self.reflex = None
        self.rtype = None

    def aopen(self, name, comparator=strcmp):
        if name not in ASSOC_NAMES:
            raise RegistryError(f"unknown associative array {name!r}")
        if getattr(self, name) is not None:
            raise DuplicateOpen(f"associative array {name!r} already open")
        assoc = AssocArray(name, comparator)
        setattr(self, name, assoc)
        return assoc

    @property
    def is_open(self):
        return self.reflex is not None and self.rtype is not None

    def descriptor(self, name):
        if self.reflex is None:
            raise LookupMiss(f"reflex: no entry for {name!r}")
        return self.reflex.aread(name)

    def lookup(self, name):
        if self.reflex is None or name not in self.reflex:
            return None
        return self.reflex.aread(name)

    def type_of(self, name):
        if self.rtype is None:
            raise LookupMiss(f"rtype: no entry for {name!r}")
        return self.rtype.aread(name)

    def coherent(self):
        return self.is_open and self.reflex.keys() == self.rtype.keys()


def check_degree(kinds, degree):
    if Kind.REDUNDANT in kinds:
        if degree % 2 == 0 or not MIN_DEGREE <= degree <= MAX_DEGREE:
            raise InvalidDegree(f"redundant degree must be odd in [{MIN_DEGREE}, {MAX_DEGREE}], got {degree}")
    elif degree != 1:
        raise InvalidDegree(f"non-redundant variables have degree 1, got {degree}")


class CellStore:
    """Fixed array of typed cells split into ``banks`` contiguous partitions.

    Replica ``j`` of a variable lives in bank ``(base_bank + j) % banks``, so a
    burst confined to one bank touches at most ``ceil(degree / banks)`` replicas.
    """

    def __init__(self, capacity=DEFAULT_CELLS, banks=DEFAULT_BANKS):
        if banks < 1 or capacity < banks:
            raise ValueError("need at least one cell per bank")
        self.capacity = capacity
        self.banks = banks
        self.values = [None] * capacity
        self.types = [None] * capacity
        self._cursor = [self.bank_start(b) for b in range(banks)]
        self._free = [[] for _ in range(banks)]
        self._next_base = 0

    def bank_of(self, slot):
        return slot * self.banks // self.capacity

    def bank_start(self, bank):
        return -(-bank * self.capacity // self.banks)

    def bank_cells(self, bank):
        return range(self.bank_start(bank), self.bank_start(bank + 1))

    def free_in_bank(self, bank):
        return self.bank_start(bank + 1) - self._cursor[bank] + len(self._free[bank])

    def allocated(self):
        return [i for i, t in enumerate(self.types) if t is not None]

    def _take(self, bank):
        if self._free[bank]:
            return heapq.heappop(self._free[bank])
        slot = self._cursor[bank]
        self._cursor[bank] += 1
        return slot

    def _reserve(self, banks_needed, type_code):
        demand = {}
        for b in banks_needed:
            demand[b] = demand.get(b, 0) + 1
        for b, n in demand.items():
            if self.free_in_bank(b) < n:
                raise OutOfCells(f"bank {b} has {self.free_in_bank(b)} free cells, {n} needed")
        slots = []
        for b in banks_needed:
            slot = self._take(b)
            self.types[slot] = type_code
            self.values[slot] = type_code.zero()
            slots.append(slot)
        return slots

    def allocate(self, name, type_code, kinds, degree=1, device=None):
        kinds = frozenset(kinds)
        check_degree(kinds, degree)
        base = self._next_base
        slots = self._reserve([(base + j) % self.banks for j in range(degree)], type_code)
        self._next_base = (base + 1) % self.banks
        return VarDescriptor(name, type_code, kinds, slots, base, device)

    def resize(self, desc, degree):
        """Change a redundant descriptor's degree in place, keeping surviving replicas."""
        check_degree(desc.kinds, degree)
        if degree > desc.degree:
            banks = [(desc.base_bank + j) % self.banks for j in range(desc.degree, degree)]
            desc.slots.extend(self._reserve(banks, desc.type_code))
        else:
            for slot in desc.slots[degree:]:
                self.release(slot)
            del desc.slots[degree:]
        return desc

    def release(self, slot):
        self.values[slot] = None
        self.types[slot] = None
        heapq.heappush(self._free[self.bank_of(slot)], slot)

    def cell_read(self, slot):
        if self.types[slot] is None:
            raise RegistryError(f"cell {slot} is not allocated")
        return self.values[slot]

    def cell_write(self, slot, value):
        t = self.types[slot]
        if t is None:
            raise RegistryError(f"cell {slot} is not allocated")
        if not t.accepts(value) or (t is TypeCode.INT and isinstance(value, float)):
            raise TypeMismatch(f"cell {slot} holds {t.keyword}, got {type(value).__name__}")
        self.values[slot] = t.coerce(value)


def allocate(store, name, type_code, kinds, degree=1):
    return store.allocate(name, type_code, kinds, degree)


def cell_read(store, slot):
    return store.cell_read(slot)


def cell_write(store, slot, value):
    store.cell_write(slot, value)
