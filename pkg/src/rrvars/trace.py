"""Tab-separated runtime trace: ``<tick>\\t<KIND>\\t<name>\\t<value>``."""
import threading

from .values import format_value

SENSE = "SENSE"
ACT = "ACT"
VOTE = "VOTE"
REDUNDANCE = "REDUNDANCE"
NOTE = "NOTE"
KINDS = (SENSE, ACT, VOTE, REDUNDANCE, NOTE)


def _clean(text):
    return str(text).replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


class TraceLog:
    def __init__(self, clock=lambda: 0):
        self.clock = clock
        self.records = []
        self._lock = threading.Lock()

    def emit(self, kind, name, value, tick=None):
        if kind not in KINDS:
            raise ValueError(f"unknown trace kind {kind!r}")
        if tick is None:
            tick = self.clock()
        with self._lock:
            self.records.append((tick, kind, name, format_value(value)))

    def note(self, name, text, tick=None):
        self.emit(NOTE, name, text, tick)

    def lines(self):
        return [f"{t}\t{k}\t{_clean(n)}\t{_clean(v)}" for t, k, n, v in self.records]

    def text(self):
        return "".join(line + "\n" for line in self.lines())

    def of_kind(self, kind):
        return [r for r in self.records if r[1] == kind]


def parse_trace(text):
    """Split trace text back into ``(tick, kind, name, value)`` tuples (values stay text)."""
    out = []
    for line in text.splitlines():
        tick, kind, name, value = line.split("\t", 3)
        out.append((int(tick), kind, name, value))
    return out


def normalize(text):
    """Order-normalize a trace for comparisons between server schedules.

    Records are grouped by tick; within a tick, each (kind, name) stream keeps
    its relative order but streams are sorted.
    """
    records = parse_trace(text)
    keyed = sorted(enumerate(records), key=lambda ir: (ir[1][0], ir[1][1], ir[1][2], ir[0]))
    return "".join("\t".join(map(str, r)) + "\n" for _, r in keyed)
