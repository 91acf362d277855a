"""Type codes, variable kinds and value helpers used across the runtime."""
import enum


class TypeCode(enum.IntEnum):
    INT = 1
    FLOAT = 2
    STRING = 3

    @property
    def keyword(self):
        return self.name.lower()

    @classmethod
    def from_keyword(cls, word):
        return cls[word.upper()]

    def zero(self):
        return {TypeCode.INT: 0, TypeCode.FLOAT: 0.0, TypeCode.STRING: ""}[self]

    def accepts(self, value):
        if self is TypeCode.INT:
            return isinstance(value, int) and not isinstance(value, bool)
        if self is TypeCode.FLOAT:
            return isinstance(value, (int, float)) and not isinstance(value, bool)
        return isinstance(value, str)

    def coerce(self, value):
        """Return `value` stored as this type; ints widen to floats."""
        if self is TypeCode.FLOAT and isinstance(value, int):
            return float(value)
        return value

    def parse(self, text):
        text = text.strip()
        if self is TypeCode.INT:
            return int(text)
        if self is TypeCode.FLOAT:
            return float(text)
        return text


class Kind(str, enum.Enum):
    REFLECTIVE = "reflective"
    REFRACTIVE = "refractive"
    REDUNDANT = "redundant"

    def __str__(self):
        return self.value


def type_of(value):
    if isinstance(value, str):
        return TypeCode.STRING
    if isinstance(value, float):
        return TypeCode.FLOAT
    return TypeCode.INT


def format_value(value):
    """Render a runtime value the way `print` and the trace log show it."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_literal(text):
    """Best-effort typed parse of a config/trace token: int, then float, then string."""
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] == '"':
        return text[1:-1]
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text
