"""Tokenizer for RRC source."""
import re
from dataclasses import dataclass
from typing import Tuple

from ..errors import LexError

KEYWORDS = frozenset({"int", "float", "string", "if", "else", "while", "return", "sleep", "print"})
ATTRIBUTE_WORDS = frozenset({"ref_t", "redundant"})

KEYWORD = "keyword"
ATTRIBUTE = "attribute"
IDENTIFIER = "identifier"
INT_LITERAL = "int-literal"
FLOAT_LITERAL = "float-literal"
STRING_LITERAL = "string-literal"
OPERATOR = "operator"
PUNCTUATION = "punctuation"

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<float>\d+\.\d*(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<op>&&|\|\||==|!=|<=|>=|[-+*/%<>=])
  | (?P<punct>[;,(){}])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    span: Tuple[int, int]

    @property
    def value(self):
        if self.kind == INT_LITERAL:
            return int(self.lexeme)
        if self.kind == FLOAT_LITERAL:
            return float(self.lexeme)
        if self.kind == STRING_LITERAL:
            return unescape(self.lexeme[1:-1])
        return self.lexeme

    def __repr__(self):
        return f"{self.kind}({self.lexeme})"


def unescape(body):
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            i += 1
            out.append(_ESCAPES.get(body[i], body[i]))
        else:
            out.append(c)
        i += 1
    return "".join(out)


def escape(text):
    return (text.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\t", "\\t"))


def tokenize(source):
    """Split `source` into tokens, dropping whitespace and ``//`` comments."""
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            if source[pos] == '"':
                raise LexError("unterminated string literal", (line, col))
            raise LexError(f"unexpected character {source[pos]!r}", (line, col))
        group = m.lastgroup
        text = m.group()
        if group == "word":
            if text in ATTRIBUTE_WORDS:
                kind = ATTRIBUTE
            elif text in KEYWORDS:
                kind = KEYWORD
            else:
                kind = IDENTIFIER
            tokens.append(Token(kind, text, (line, col)))
        elif group not in ("ws", "comment"):
            kind = {"float": FLOAT_LITERAL, "int": INT_LITERAL, "string": STRING_LITERAL,
                    "op": OPERATOR, "punct": PUNCTUATION}[group]
            tokens.append(Token(kind, text, (line, col)))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    return tokens
