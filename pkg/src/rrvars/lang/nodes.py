"""Syntax tree for RRC programs.

Nodes are frozen dataclasses so two trees compare structurally with ``==``.
Source spans are carried for diagnostics but excluded from comparison.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..values import TypeCode

Span = Tuple[int, int]

REF_T = "ref_t"
REDUNDANT = "redundant"
ATTRIBUTES = (REF_T, REDUNDANT)

BINARY_OPS = ("+", "-", "*", "/", "%", "<", ">", "<=", ">=", "==", "!=", "&&", "||")


@dataclass(frozen=True)
class Literal:
    value: Union[int, float, str]
    type: TypeCode
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarRef:
    name: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CallExpr:
    """Call in expression position; only value-returning runtime intrinsics."""
    name: str
    args: Tuple["Expr", ...] = ()
    span: Optional[Span] = field(default=None, compare=False, repr=False)


Expr = Union[Literal, VarRef, Binary, CallExpr]


@dataclass(frozen=True)
class Assign:
    name: str
    value: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Tuple["Stmt", ...]
    orelse: Tuple["Stmt", ...] = ()
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    body: Tuple["Stmt", ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[Expr, ...] = ()
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sleep:
    ticks: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Print:
    args: Tuple[Expr, ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Return:
    span: Optional[Span] = field(default=None, compare=False, repr=False)


Stmt = Union[Assign, If, While, Call, Sleep, Print, Return]


@dataclass(frozen=True)
class VarDecl:
    name: str
    base_type: TypeCode
    attrs: frozenset = frozenset()
    init: Optional[Literal] = None
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FuncDef:
    name: str
    body: Tuple[Stmt, ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class AstProgram:
    decls: Tuple[VarDecl, ...]
    functions: Tuple[FuncDef, ...]

    def decl(self, name):
        for d in self.decls:
            if d.name == name:
                return d
        return None

    def function(self, name):
        for f in self.functions:
            if f.name == name:
                return f
        return None

    @property
    def has_attributes(self):
        return any(d.attrs for d in self.decls)


def walk_stmts(stmts):
    """Yield every statement in `stmts`, depth first, including nested blocks."""
    for s in stmts:
        yield s
        if isinstance(s, If):
            yield from walk_stmts(s.then)
            yield from walk_stmts(s.orelse)
        elif isinstance(s, While):
            yield from walk_stmts(s.body)


def stmt_exprs(stmt):
    if isinstance(stmt, Assign):
        return (stmt.value,)
    if isinstance(stmt, (If, While)):
        return (stmt.cond,)
    if isinstance(stmt, (Call, Print)):
        return stmt.args
    if isinstance(stmt, Sleep):
        return (stmt.ticks,)
    return ()


def walk_expr(expr):
    yield expr
    if isinstance(expr, Binary):
        yield from walk_expr(expr.left)
        yield from walk_expr(expr.right)
    elif isinstance(expr, CallExpr):
        for a in expr.args:
            yield from walk_expr(a)
