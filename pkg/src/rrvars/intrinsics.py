"""Names of the runtime calls the translator injects into programs."""
from .values import TypeCode

AOPEN = "__aopen"
AWRITE_REFLEX = "__awrite_reflex"
AWRITE_RTYPE = "__awrite_rtype"
SPAWN_SERVER = "__spawn_server"
CALL_V = "__call_v"

_ASSIGN_PREFIX = "__redundant_assign_"
_READ_PREFIX = "__redundant_read_"

# parameter slot meaning "string literal naming a declared variable"
VARNAME = "varname"


def redundant_assign(type_code):
    return _ASSIGN_PREFIX + type_code.keyword


def redundant_read(type_code):
    return _READ_PREFIX + type_code.keyword


def signature(name):
    """Return ``(params, result_type)`` for intrinsic `name`, or None if unknown.

    ``result_type`` is None for statement-only intrinsics.
    """
    fixed = {
        AOPEN: ((TypeCode.STRING,), None),
        AWRITE_REFLEX: ((VARNAME,), None),
        AWRITE_RTYPE: ((VARNAME, TypeCode.INT), None),
        SPAWN_SERVER: ((), None),
        CALL_V: ((VARNAME,), None),
    }
    if name in fixed:
        return fixed[name]
    for prefix in (_ASSIGN_PREFIX, _READ_PREFIX):
        if name.startswith(prefix):
            try:
                t = TypeCode.from_keyword(name[len(prefix):])
            except KeyError:
                return None
            if prefix == _ASSIGN_PREFIX:
                return (VARNAME, t), None
            return (VARNAME,), t
    return None


def redundant_type(name):
    """Type code encoded in a ``__redundant_*_T`` name, else None."""
    for prefix in (_ASSIGN_PREFIX, _READ_PREFIX):
        if name.startswith(prefix):
            try:
                return TypeCode.from_keyword(name[len(prefix):])
            except KeyError:
                return None
    return None


def is_redundant_assign(name):
    return name.startswith(_ASSIGN_PREFIX)


def is_redundant_read(name):
    return name.startswith(_READ_PREFIX)
