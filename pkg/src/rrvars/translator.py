"""Instrumentation pass: turns attributed RRC into plain RRC plus runtime calls.

The pass strips ``ref_t``/``redundant`` attributes, records a registration
plan, prepends the registry prologue to ``main`` and rewrites accesses:

* a write to a refractive ``v`` is followed by ``__call_v("v")``;
* a write to a redundant ``w`` of type ``T`` becomes ``__redundant_assign_T("w", e)``;
* every read of a redundant ``w`` becomes ``__redundant_read_T("w")``.
"""
from dataclasses import dataclass, replace
from typing import FrozenSet, Mapping, Optional, Tuple

from . import intrinsics
from .errors import RewriteConflict, UnknownDevice
from .lang.nodes import (
    REDUNDANT, REF_T, AstProgram, Assign, Binary, Call, CallExpr, If, Literal, Print, Sleep,
    VarRef, While,
)
from .lang.parser import check, parse
from .lang.lexer import tokenize
from .lang.printer import pretty_print
from .values import Kind, TypeCode

SENSOR = "sensor"
ACTUATOR = "actuator"

# name of the variable published by the redundancy controller; always voted
REDUNDANCE = "redundance"

BUILTIN_CAPABILITIES = {
    "cpu": frozenset({SENSOR}),
    "tcpTxRate": frozenset({SENSOR, ACTUATOR}),
    "rfid": frozenset({SENSOR}),
    REDUNDANCE: frozenset({SENSOR}),
}


@dataclass(frozen=True)
class PlanEntry:
    name: str
    type_code: TypeCode
    kinds: FrozenSet[Kind]


@dataclass(frozen=True)
class RegistrationPlan:
    entries: Tuple[PlanEntry, ...] = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def get(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        return None

    def names_with(self, kind):
        return {e.name for e in self.entries if kind in e.kinds}


@dataclass(frozen=True)
class InstrumentedProgram:
    ast: AstProgram
    plan: RegistrationPlan


def _kinds_for(decl, capabilities):
    kinds = set()
    if REF_T in decl.attrs:
        caps = capabilities.get(decl.name)
        if caps is None:
            raise UnknownDevice(f"no device named {decl.name!r} for ref_t variable")
        if SENSOR in caps:
            kinds.add(Kind.REFLECTIVE)
        if ACTUATOR in caps:
            kinds.add(Kind.REFRACTIVE)
        if decl.name == REDUNDANCE:
            kinds.add(Kind.REDUNDANT)
    if REDUNDANT in decl.attrs:
        kinds.add(Kind.REDUNDANT)
    return frozenset(kinds)


def strip_attributes(ast, capabilities: Optional[Mapping] = None):
    """Remove attributes; return the bare AST and the registration plan.

    `capabilities` maps device name to a set of ``"sensor"``/``"actuator"``;
    it decides whether a ``ref_t`` variable is reflective, refractive or both.
    The builtin device set is used when it is omitted.
    """
    if capabilities is None:
        capabilities = BUILTIN_CAPABILITIES
    entries = []
    decls = []
    for d in ast.decls:
        if d.attrs:
            entries.append(PlanEntry(d.name, d.base_type, _kinds_for(d, capabilities)))
            d = replace(d, attrs=frozenset())
        decls.append(d)
    if not entries:
        return ast, RegistrationPlan()
    return AstProgram(tuple(decls), ast.functions), RegistrationPlan(tuple(entries))


def _name(text):
    return Literal(text, TypeCode.STRING)


def emit_prologue(plan):
    if not len(plan):
        return []
    stmts = [Call(intrinsics.AOPEN, (_name("reflex"),)),
             Call(intrinsics.AOPEN, (_name("rtype"),))]
    for e in plan:
        stmts.append(Call(intrinsics.AWRITE_REFLEX, (_name(e.name),)))
        stmts.append(Call(intrinsics.AWRITE_RTYPE, (_name(e.name), Literal(int(e.type_code), TypeCode.INT))))
    stmts.append(Call(intrinsics.SPAWN_SERVER))
    return stmts


class _Rewriter:
    def __init__(self, ast, plan):
        self.types = {d.name: d.base_type for d in ast.decls}
        self.refractive = plan.names_with(Kind.REFRACTIVE)
        self.redundant = plan.names_with(Kind.REDUNDANT)

    def expr(self, e):
        if isinstance(e, VarRef) and e.name in self.redundant:
            return CallExpr(intrinsics.redundant_read(self.types[e.name]), (_name(e.name),), span=e.span)
        if isinstance(e, Binary):
            return replace(e, left=self.expr(e.left), right=self.expr(e.right))
        if isinstance(e, CallExpr):
            return replace(e, args=tuple(self.expr(a) for a in e.args))
        return e

    def block(self, stmts):
        out = []
        for s in stmts:
            out.extend(self.stmt(s))
        return tuple(out)

    def stmt(self, s):
        if isinstance(s, Assign):
            value = self.expr(s.value)
            if s.name in self.redundant:
                return [Call(intrinsics.redundant_assign(self.types[s.name]), (_name(s.name), value), span=s.span)]
            out = [replace(s, value=value)]
            if s.name in self.refractive:
                out.append(Call(intrinsics.CALL_V, (_name(s.name),), span=s.span))
            return out
        if isinstance(s, If):
            return [replace(s, cond=self.expr(s.cond), then=self.block(s.then), orelse=self.block(s.orelse))]
        if isinstance(s, While):
            return [replace(s, cond=self.expr(s.cond), body=self.block(s.body))]
        if isinstance(s, Call):
            return [replace(s, args=tuple(self.expr(a) for a in s.args))]
        if isinstance(s, Print):
            return [replace(s, args=tuple(self.expr(a) for a in s.args))]
        if isinstance(s, Sleep):
            return [replace(s, ticks=self.expr(s.ticks))]
        return [s]


def rewrite_body(ast, plan):
    """Rewrite refractive/redundant accesses and prepend the prologue to ``main``."""
    if not len(plan):
        return ast
    for e in plan:
        if Kind.REFRACTIVE in e.kinds and Kind.REDUNDANT in e.kinds:
            raise RewriteConflict(f"variable {e.name!r} cannot be both refractive and redundant")
    rw = _Rewriter(ast, plan)
    functions = []
    for f in ast.functions:
        body = rw.block(f.body)
        if f.name == "main":
            body = tuple(emit_prologue(plan)) + body
        functions.append(replace(f, body=body))
    return AstProgram(ast.decls, tuple(functions))


def instrument(ast, capabilities=None):
    bare, plan = strip_attributes(ast, capabilities)
    out = rewrite_body(bare, plan)
    check(out)
    return InstrumentedProgram(out, plan)


def translate(source, device_capabilities=None):
    """Translate RRC source text into instrumented RRC source text."""
    program = parse(tokenize(source))
    return pretty_print(instrument(program, device_capabilities).ast)
