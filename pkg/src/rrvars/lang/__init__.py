"""Lexer, parser and pretty-printer for the RRC mini-language."""
from .lexer import Token, tokenize
from .nodes import (
    AstProgram, Assign, Binary, Call, CallExpr, FuncDef, If, Literal, Print, Return, Sleep,
    VarDecl, VarRef, While,
)
from .parser import check, parse, parse_source
from .printer import format_decl, pretty_print

__all__ = [
    "Token", "tokenize", "parse", "parse_source", "check", "pretty_print", "format_decl",
    "AstProgram", "Assign", "Binary", "Call", "CallExpr", "FuncDef", "If", "Literal",
    "Print", "Return", "Sleep", "VarDecl", "VarRef", "While",
]
