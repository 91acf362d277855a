"""Recursive-descent parser and post-parse checks for RRC."""
from .. import intrinsics
from ..errors import DuplicateDeclaration, ParseError, TypeCheckError, UnresolvedName
from ..values import TypeCode
from . import lexer
from .lexer import tokenize
from .nodes import (
    AstProgram, Assign, Binary, Call, CallExpr, FuncDef, If, Literal, Print, Return,
    Sleep, VarDecl, VarRef, While,
)

# lowest to highest
PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, ">": 4, "<=": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}

TYPE_WORDS = ("int", "float", "string")


class _Parser:
    def __init__(self, tokens):
        self.tokens = list(tokens)
        self.pos = 0

    # token helpers

    def peek(self, offset=0):
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, lexeme, offset=0):
        tok = self.peek(offset)
        return tok is not None and tok.lexeme == lexeme and tok.kind != lexer.STRING_LITERAL

    def advance(self):
        tok = self.peek()
        if tok is None:
            self.fail_eof()
        self.pos += 1
        return tok

    def fail_eof(self, expected=None):
        last = self.tokens[-1] if self.tokens else None
        span = last.span if last else (1, 1)
        what = f", expected {expected}" if expected else ""
        raise ParseError(f"unexpected end of input{what}", span)

    def expect(self, lexeme):
        tok = self.peek()
        if tok is None:
            self.fail_eof(repr(lexeme))
        if not self.at(lexeme):
            raise ParseError(f"expected {lexeme!r}, found {tok.lexeme!r}", tok.span)
        return self.advance()

    def expect_kind(self, kind):
        tok = self.peek()
        if tok is None:
            self.fail_eof(kind)
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.lexeme!r}", tok.span)
        return self.advance()

    # grammar

    def program(self):
        decls, functions = [], []
        while self.peek() is not None:
            if self.at("int") and self.peek(1) is not None and self.at("(", 2):
                functions.append(self.funcdef())
            elif functions:
                tok = self.peek()
                raise ParseError(f"declaration after function definitions: {tok.lexeme!r}", tok.span)
            else:
                decls.append(self.decl())
        if not functions:
            raise ParseError("program defines no functions", self.tokens[-1].span if self.tokens else (1, 1))
        return AstProgram(tuple(decls), tuple(functions))

    def decl(self):
        start = self.peek()
        attrs = set()
        while self.peek() is not None and self.peek().kind == lexer.ATTRIBUTE:
            attrs.add(self.advance().lexeme)
        tok = self.peek()
        if tok is None:
            self.fail_eof("type")
        if tok.lexeme not in TYPE_WORDS or tok.kind != lexer.KEYWORD:
            raise ParseError(f"expected type, found {tok.lexeme!r}", tok.span)
        base = TypeCode.from_keyword(self.advance().lexeme)
        name = self.expect_kind(lexer.IDENTIFIER)
        init = None
        if self.at("="):
            self.advance()
            init = self.literal()
        self.expect(";")
        return VarDecl(name.lexeme, base, frozenset(attrs), init, span=start.span)

    def literal(self):
        tok = self.peek()
        if tok is None:
            self.fail_eof("literal")
        neg = False
        if self.at("-") and self.peek(1) is not None and self.peek(1).kind in (lexer.INT_LITERAL, lexer.FLOAT_LITERAL):
            self.advance()
            neg = True
        lit = self.peek()
        if lit is None:
            self.fail_eof("literal")
        kinds = {lexer.INT_LITERAL: TypeCode.INT, lexer.FLOAT_LITERAL: TypeCode.FLOAT,
                 lexer.STRING_LITERAL: TypeCode.STRING}
        if lit.kind not in kinds:
            raise ParseError(f"expected literal, found {lit.lexeme!r}", lit.span)
        self.advance()
        value = -lit.value if neg else lit.value
        return Literal(value, kinds[lit.kind], span=tok.span)

    def funcdef(self):
        start = self.expect("int")
        name = self.expect_kind(lexer.IDENTIFIER)
        self.expect("(")
        self.expect(")")
        return FuncDef(name.lexeme, self.block(), span=start.span)

    def block(self):
        self.expect("{")
        body = []
        while not self.at("}"):
            if self.peek() is None:
                self.fail_eof("'}'")
            body.append(self.statement())
        self.advance()
        return tuple(body)

    def statement(self):
        tok = self.peek()
        if tok.kind == lexer.KEYWORD:
            if tok.lexeme == "if":
                return self.if_stmt()
            if tok.lexeme == "while":
                self.advance()
                self.expect("(")
                cond = self.expr()
                self.expect(")")
                return While(cond, self.block(), span=tok.span)
            if tok.lexeme == "sleep":
                self.advance()
                self.expect("(")
                ticks = self.expr()
                self.expect(")")
                self.expect(";")
                return Sleep(ticks, span=tok.span)
            if tok.lexeme == "print":
                self.advance()
                args = self.args()
                self.expect(";")
                return Print(args, span=tok.span)
            if tok.lexeme == "return":
                self.advance()
                self.expect(";")
                return Return(span=tok.span)
        if tok.kind == lexer.IDENTIFIER:
            self.advance()
            if self.at("="):
                self.advance()
                value = self.expr()
                self.expect(";")
                return Assign(tok.lexeme, value, span=tok.span)
            if self.at("("):
                args = self.args()
                self.expect(";")
                return Call(tok.lexeme, args, span=tok.span)
            nxt = self.peek()
            if nxt is None:
                self.fail_eof("'=' or '('")
            raise ParseError(f"expected '=' or '(', found {nxt.lexeme!r}", nxt.span)
        raise ParseError(f"unexpected {tok.lexeme!r} at start of statement", tok.span)

    def if_stmt(self):
        tok = self.expect("if")
        self.expect("(")
        cond = self.expr()
        self.expect(")")
        then = self.block()
        orelse = ()
        if self.at("else"):
            self.advance()
            orelse = (self.if_stmt(),) if self.at("if") else self.block()
        return If(cond, then, orelse, span=tok.span)

    def args(self):
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.expr())
            while self.at(","):
                self.advance()
                args.append(self.expr())
        self.expect(")")
        return tuple(args)

    def expr(self, min_prec=1):
        left = self.primary()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != lexer.OPERATOR or tok.lexeme not in PRECEDENCE:
                return left
            prec = PRECEDENCE[tok.lexeme]
            if prec < min_prec:
                return left
            self.advance()
            right = self.expr(prec + 1)
            left = Binary(tok.lexeme, left, right, span=tok.span)

    def primary(self):
        tok = self.peek()
        if tok is None:
            self.fail_eof("expression")
        if tok.kind in (lexer.INT_LITERAL, lexer.FLOAT_LITERAL, lexer.STRING_LITERAL) or (
                self.at("-") and self.peek(1) is not None
                and self.peek(1).kind in (lexer.INT_LITERAL, lexer.FLOAT_LITERAL)):
            return self.literal()
        if tok.kind == lexer.IDENTIFIER:
            self.advance()
            if self.at("("):
                return CallExpr(tok.lexeme, self.args(), span=tok.span)
            return VarRef(tok.lexeme, span=tok.span)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {tok.lexeme!r} in expression", tok.span)


def parse(tokens):
    """Parse a token list into a checked AstProgram."""
    program = _Parser(tokens).program()
    check(program)
    return program


def parse_source(source):
    return parse(tokenize(source))


# semantic checks

_ARITH = ("+", "-", "*", "/", "%")
_ORDER = ("<", ">", "<=", ">=")
_EQUALITY = ("==", "!=")


class _Checker:
    def __init__(self, program):
        self.program = program
        self.vars = {}
        self.funcs = {}

    def run(self):
        for d in self.program.decls:
            if d.name in self.vars:
                raise DuplicateDeclaration(f"variable {d.name!r} declared twice", d.span)
            self.vars[d.name] = d
            if d.init is not None and not _assignable(d.base_type, d.init.type):
                raise TypeCheckError(
                    f"cannot initialise {d.base_type.keyword} {d.name!r} with a {d.init.type.keyword}", d.span)
        for f in self.program.functions:
            if f.name in self.funcs or f.name in self.vars:
                raise DuplicateDeclaration(f"name {f.name!r} defined twice", f.span)
            if f.name.startswith("__"):
                raise ParseError(f"function names starting with '__' are reserved: {f.name!r}", f.span)
            self.funcs[f.name] = f
        if "main" not in self.funcs:
            raise ParseError("program has no main function", self.program.functions[0].span)
        for f in self.program.functions:
            self.block(f.body)

    def block(self, stmts):
        for s in stmts:
            self.stmt(s)

    def stmt(self, s):
        if isinstance(s, Assign):
            decl = self.var(s.name, s.span)
            t = self.expr(s.value)
            if not _assignable(decl.base_type, t):
                raise TypeCheckError(f"cannot assign {t.keyword} to {decl.base_type.keyword} {s.name!r}", s.span)
        elif isinstance(s, If):
            self.condition(s.cond)
            self.block(s.then)
            self.block(s.orelse)
        elif isinstance(s, While):
            self.condition(s.cond)
            self.block(s.body)
        elif isinstance(s, Sleep):
            if self.expr(s.ticks) is not TypeCode.INT:
                raise TypeCheckError("sleep takes an int tick count", s.span)
        elif isinstance(s, Print):
            for a in s.args:
                self.expr(a)
        elif isinstance(s, Call):
            if s.name.startswith("__"):
                sig = intrinsics.signature(s.name)
                if sig is None:
                    raise UnresolvedName(f"unknown runtime call {s.name!r}", s.span)
                if sig[1] is not None:
                    raise TypeCheckError(f"{s.name!r} returns a value and cannot be a statement", s.span)
                self.intrinsic_args(s.name, sig[0], s.args, s.span)
            else:
                if s.name not in self.funcs:
                    raise UnresolvedName(f"undefined function {s.name!r}", s.span)
                if s.args:
                    raise TypeCheckError(f"function {s.name!r} takes no arguments", s.span)

    def condition(self, e):
        if self.expr(e) is TypeCode.STRING:
            raise TypeCheckError("condition must be numeric", _span(e))

    def var(self, name, span):
        decl = self.vars.get(name)
        if decl is None:
            raise UnresolvedName(f"undeclared variable {name!r}", span)
        return decl

    def intrinsic_args(self, name, params, args, span):
        if len(params) != len(args):
            raise TypeCheckError(f"{name!r} takes {len(params)} argument(s)", span)
        for p, a in zip(params, args):
            if p == intrinsics.VARNAME:
                if not (isinstance(a, Literal) and a.type is TypeCode.STRING):
                    raise TypeCheckError(f"{name!r} expects a variable name string", span)
                decl = self.var(a.value, a.span or span)
                rt = intrinsics.redundant_type(name)
                if rt is not None and rt is not decl.base_type:
                    raise TypeCheckError(f"{name!r} used on {decl.base_type.keyword} {a.value!r}", span)
            elif not _assignable(p, self.expr(a)):
                raise TypeCheckError(f"bad argument type for {name!r}", span)

    def expr(self, e):
        if isinstance(e, Literal):
            return e.type
        if isinstance(e, VarRef):
            return self.var(e.name, e.span).base_type
        if isinstance(e, CallExpr):
            sig = intrinsics.signature(e.name) if e.name.startswith("__") else None
            if sig is None or sig[1] is None:
                if e.name in self.funcs:
                    raise TypeCheckError(f"function {e.name!r} does not return a value", e.span)
                raise UnresolvedName(f"unknown value call {e.name!r}", e.span)
            self.intrinsic_args(e.name, sig[0], e.args, e.span)
            return sig[1]
        lt, rt = self.expr(e.left), self.expr(e.right)
        if e.op in _EQUALITY:
            if (lt is TypeCode.STRING) != (rt is TypeCode.STRING):
                raise TypeCheckError(f"cannot compare {lt.keyword} with {rt.keyword}", e.span)
            return TypeCode.INT
        if TypeCode.STRING in (lt, rt):
            raise TypeCheckError(f"operator {e.op!r} does not apply to strings", e.span)
        if e.op in _ARITH:
            if e.op == "%" and TypeCode.FLOAT in (lt, rt):
                raise TypeCheckError("operator '%' needs int operands", e.span)
            return TypeCode.FLOAT if TypeCode.FLOAT in (lt, rt) else TypeCode.INT
        return TypeCode.INT


def _assignable(target, source):
    if target is source:
        return True
    return target is TypeCode.FLOAT and source is TypeCode.INT


def _span(e):
    return getattr(e, "span", None)


def check(program):
    """Validate names and types; raises a ParseError subclass on failure."""
    _Checker(program).run()
