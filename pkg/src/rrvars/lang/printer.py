"""Canonical pretty-printer: one statement per line, 4-space indents."""
from ..values import TypeCode
from .lexer import escape
from .nodes import (
    ATTRIBUTES, Assign, Binary, Call, CallExpr, If, Literal, Print, Return, Sleep, VarRef, While,
)
from .parser import PRECEDENCE

INDENT = "    "


def format_literal(lit):
    if lit.type is TypeCode.STRING:
        return f'"{escape(lit.value)}"'
    if lit.type is TypeCode.FLOAT:
        return repr(float(lit.value))
    return str(lit.value)


def format_expr(e, parent_prec=0, right=False):
    if isinstance(e, Literal):
        return format_literal(e)
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, CallExpr):
        return f"{e.name}({', '.join(format_expr(a) for a in e.args)})"
    prec = PRECEDENCE[e.op]
    text = f"{format_expr(e.left, prec)} {e.op} {format_expr(e.right, prec, right=True)}"
    # operators are left-associative, so an equal-precedence right operand needs parens
    if prec < parent_prec or (right and prec == parent_prec):
        return f"({text})"
    return text


def format_decl(d):
    words = [a for a in ATTRIBUTES if a in d.attrs]
    words += [d.base_type.keyword, d.name]
    text = " ".join(words)
    if d.init is not None:
        text += f" = {format_literal(d.init)}"
    return text + ";"


def _block(stmts, depth, out):
    for s in stmts:
        _stmt(s, depth, out)


def _stmt(s, depth, out):
    pad = INDENT * depth
    if isinstance(s, Assign):
        out.append(f"{pad}{s.name} = {format_expr(s.value)};")
    elif isinstance(s, Call):
        out.append(f"{pad}{s.name}({', '.join(format_expr(a) for a in s.args)});")
    elif isinstance(s, Sleep):
        out.append(f"{pad}sleep({format_expr(s.ticks)});")
    elif isinstance(s, Print):
        out.append(f"{pad}print({', '.join(format_expr(a) for a in s.args)});")
    elif isinstance(s, Return):
        out.append(f"{pad}return;")
    elif isinstance(s, While):
        out.append(f"{pad}while ({format_expr(s.cond)}) {{")
        _block(s.body, depth + 1, out)
        out.append(f"{pad}}}")
    elif isinstance(s, If):
        out.append(f"{pad}if ({format_expr(s.cond)}) {{")
        _block(s.then, depth + 1, out)
        if s.orelse:
            out.append(f"{pad}}} else {{")
            _block(s.orelse, depth + 1, out)
        out.append(f"{pad}}}")
    else:
        raise TypeError(f"not a statement: {s!r}")


def pretty_print(program):
    lines = [format_decl(d) for d in program.decls]
    for f in program.functions:
        if lines:
            lines.append("")
        lines.append(f"int {f.name}() {{")
        _block(f.body, 1, lines)
        lines.append("}")
    return "\n".join(lines) + "\n"
