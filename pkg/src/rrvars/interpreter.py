"""Tree-walking interpreter for plain and instrumented RRC programs."""
import os
from dataclasses import dataclass, field
from typing import Optional

from . import intrinsics
from . import trace as tr
from .devices import DeviceConfig
from .errors import DivisionByZero, RRError, RuntimeTrap, StartupError, UnknownCallback
from .lang.lexer import tokenize
from .lang.nodes import (
    AstProgram, Assign, Binary, Call, CallExpr, If, Literal, Print, Return, Sleep, VarRef, While,
    stmt_exprs, walk_expr, walk_stmts,
)
from .lang.parser import parse
from .redundancy import FaultScenario
from .runtime import DEFAULT_MAX_TICKS, Runtime
from .translator import REDUNDANCE, instrument
from .values import Kind, TypeCode, format_value

MAX_CALL_DEPTH = 200


class StackOverflow(RuntimeTrap):
    exit_code = 5


class _Return(Exception):
    pass


def _truncdiv(a, b):
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _cmod(a, b):
    return a - b * _truncdiv(a, b)


def redundant_names(program):
    """Variables the program accesses through ``__redundant_*`` calls."""
    names = set()
    for f in program.functions:
        for s in walk_stmts(f.body):
            calls = [s] if isinstance(s, Call) else []
            for e in stmt_exprs(s):
                calls.extend(x for x in walk_expr(e) if isinstance(x, CallExpr))
            for c in calls:
                if intrinsics.redundant_type(c.name) is not None and c.args:
                    names.add(c.args[0].value)
    return names


class Interpreter:
    def __init__(self, program, runtime, plan=None):
        if program.has_attributes:
            raise StartupError("program still carries ref_t/redundant attributes; translate it first")
        self.program = program
        self.rt = runtime
        self.plan = plan
        self.decls = {d.name: d for d in program.decls}
        self.funcs = {f.name: f for f in program.functions}
        self.globals = {d.name: (d.base_type.coerce(d.init.value) if d.init else d.base_type.zero())
                        for d in program.decls}
        self._redundant = redundant_names(program) if plan is None else plan.names_with(Kind.REDUNDANT)
        self.output = []
        self._pending = []
        self._in_callback = False
        self._depth = 0

    # entry

    def run(self):
        try:
            self.block(self.funcs["main"].body)
        except _Return:
            pass

    # time and callbacks

    def tick(self, n=1):
        for _ in range(n):
            self.rt.advance_one()
            self._pending.extend(self.rt.server.take_fired())
            self.dispatch()

    def dispatch(self):
        if self._in_callback:
            return
        self._in_callback = True
        try:
            while self._pending:
                watch, _ = self._pending.pop(0)
                self.rt.trace.note(watch.callback, f"{watch.variable}={format_value(watch.value)}")
                self.call(watch.callback)
        finally:
            self._in_callback = False

    # variables

    def registered(self, name):
        return self.rt.registry.reflex is not None and name in self.rt.registry.reflex

    def load(self, name):
        if self.registered(name):
            return self.rt.read(name)
        return self.globals[name]

    def store(self, name, value):
        value = self.decls[name].base_type.coerce(value)
        if self.registered(name):
            self.rt.write(name, value)
        else:
            self.globals[name] = value

    # statements

    def block(self, stmts):
        for s in stmts:
            self.stmt(s)

    def stmt(self, s):
        if isinstance(s, Assign):
            self.store(s.name, self.eval(s.value))
        elif isinstance(s, If):
            if self.truthy(self.eval(s.cond)):
                self.block(s.then)
            else:
                self.block(s.orelse)
        elif isinstance(s, While):
            while self.truthy(self.eval(s.cond)):
                self.tick()
                self.block(s.body)
        elif isinstance(s, Sleep):
            self.tick(max(0, self.eval(s.ticks)))
        elif isinstance(s, Print):
            self.output.append("".join(format_value(self.eval(a)) for a in s.args) + "\n")
        elif isinstance(s, Return):
            raise _Return()
        elif isinstance(s, Call):
            if s.name.startswith("__"):
                self.intrinsic(s.name, [self.eval(a) for a in s.args])
            else:
                self.call(s.name)
        else:
            raise TypeError(f"unknown statement {s!r}")

    def call(self, name):
        func = self.funcs.get(name)
        if func is None:
            raise UnknownCallback(f"no function named {name!r}")
        if self._depth >= MAX_CALL_DEPTH:
            raise StackOverflow(f"call depth exceeds {MAX_CALL_DEPTH}")
        self._depth += 1
        try:
            self.block(func.body)
        except _Return:
            pass
        finally:
            self._depth -= 1

    @staticmethod
    def truthy(v):
        return v != 0

    # runtime calls

    def kinds_for(self, name):
        if self.plan is not None and self.plan.get(name) is not None:
            return self.plan.get(name).kinds
        kinds = set()
        dev = self.rt.devices.get(name)
        if dev is not None:
            if dev.spec.is_sensor:
                kinds.add(Kind.REFLECTIVE)
            if dev.spec.is_actuator:
                kinds.add(Kind.REFRACTIVE)
        if name in self._redundant or name == REDUNDANCE:
            kinds.add(Kind.REDUNDANT)
        if not kinds:
            raise StartupError(f"no device named {name!r}")
        return frozenset(kinds)

    def intrinsic(self, name, args):
        rt = self.rt
        if name == intrinsics.AOPEN:
            rt.aopen(args[0])
        elif name == intrinsics.AWRITE_REFLEX:
            var = args[0]
            decl = self.decls[var]
            rt.register_variable(var, decl.base_type, self.kinds_for(var),
                                 init=decl.init.value if decl.init is not None else None)
        elif name == intrinsics.AWRITE_RTYPE:
            rt.register_type(args[0], args[1])
        elif name == intrinsics.SPAWN_SERVER:
            for watch in rt.server.watches.values():
                if watch.callback not in self.funcs:
                    raise UnknownCallback(f"watch on {watch.variable!r} names missing function {watch.callback!r}")
            rt.spawn_server()
        elif name == intrinsics.CALL_V:
            rt.call_v(args[0])
        elif intrinsics.is_redundant_assign(name):
            var = args[0]
            rt.redundancy.redundant_assign(var, self.decls[var].base_type.coerce(args[1]))
        elif intrinsics.is_redundant_read(name):
            return rt.redundancy.redundant_read(args[0])
        else:
            raise StartupError(f"unknown runtime call {name!r}")

    # expressions

    def eval(self, e):
        if isinstance(e, Literal):
            return e.value
        if isinstance(e, VarRef):
            return self.load(e.name)
        if isinstance(e, CallExpr):
            return self.intrinsic(e.name, [self.eval(a) for a in e.args])
        a = self.eval(e.left)
        b = self.eval(e.right)
        op = e.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op in ("/", "%"):
            if b == 0:
                raise DivisionByZero("division by zero")
            if op == "%":
                return _cmod(a, b)
            if isinstance(a, float) or isinstance(b, float):
                return a / b
            return _truncdiv(a, b)
        if op == "<":
            return int(a < b)
        if op == ">":
            return int(a > b)
        if op == "<=":
            return int(a <= b)
        if op == ">=":
            return int(a >= b)
        if op == "==":
            return int(a == b)
        if op == "!=":
            return int(a != b)
        if op == "&&":
            return int(a != 0 and b != 0)
        if op == "||":
            return int(a != 0 or b != 0)
        raise TypeError(f"unknown operator {op!r}")


@dataclass
class RunResult:
    exit_code: int
    trace: str
    output: str
    error: Optional[str] = None
    actuators: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.exit_code, self.trace, self.output))


def _load_devices(device_config):
    if device_config is None:
        return DeviceConfig()
    if isinstance(device_config, DeviceConfig):
        return device_config
    if isinstance(device_config, (str, os.PathLike)):
        return DeviceConfig.load(device_config)
    return DeviceConfig(list(device_config))


def run(program, device_config=None, fault_scenario=None, max_ticks=DEFAULT_MAX_TICKS,
        translate=True, concurrent=False):
    """Execute an RRC program; never raises for program-level failures.

    `program` is source text or a parsed AstProgram. Attributed programs are
    instrumented first unless ``translate=False``. Returns the exit code
    (0 ok, 1 front-end/start-up, 2 integrity failure, 3 not an actuator,
    4 division by zero, 5 tick budget), the trace text and printed output.
    """
    rt = None
    interp = None
    try:
        cfg = _load_devices(device_config)
        if isinstance(fault_scenario, (str, os.PathLike)):
            fault_scenario = FaultScenario.load(fault_scenario)
        ast = program if isinstance(program, AstProgram) else parse(tokenize(program))
        plan = None
        if translate and ast.has_attributes:
            inst = instrument(ast, cfg.capabilities())
            ast, plan = inst.ast, inst.plan
        s = cfg.settings
        rt = Runtime(cfg.devices, fault_scenario, cells=int(s.get("cells", 4096)),
                     banks=int(s.get("banks", 8)), epsilon=float(s.get("epsilon", 1e-9)),
                     max_ticks=max_ticks, concurrent=concurrent)
        interp = Interpreter(ast, rt, plan)
        interp.run()
        code, error = 0, None
    except RRError as exc:
        code, error = exc.exit_code, str(exc)
        if rt is not None and isinstance(exc, RuntimeTrap):
            rt.trace.note("trap", f"{type(exc).__name__}: {exc}")
    except OSError as exc:
        code, error = 1, str(exc)
    finally:
        if rt is not None:
            rt.close()
    return RunResult(
        code,
        rt.trace.text() if rt is not None else "",
        "".join(interp.output) if interp is not None else "",
        error,
        list(rt.actuators.entries) if rt is not None else [],
    )
