"""Exception hierarchy shared by the toolchain.

Every error carries the process exit code the runner reports for it.
"""


class RRError(Exception):
    exit_code = 1


class SourceError(RRError):
    """An error tied to a (line, column) position in RRC source."""

    def __init__(self, message, span=None):
        self.message = message
        self.span = span
        if span is not None:
            message = f"{span[0]}:{span[1]}: {message}"
        super().__init__(message)


class LexError(SourceError):
    pass


class ParseError(SourceError):
    pass


class DuplicateDeclaration(ParseError):
    pass


class UnresolvedName(ParseError):
    pass


class TypeCheckError(ParseError):
    pass


class TranslateError(RRError):
    pass


class RewriteConflict(TranslateError):
    pass


class UnknownDevice(TranslateError):
    pass


class ConfigError(RRError):
    pass


class RegistryError(RRError):
    pass


class DuplicateOpen(RegistryError):
    pass


class LookupMiss(RegistryError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class StoreError(RRError):
    pass


class OutOfCells(StoreError):
    pass


class InvalidDegree(StoreError):
    pass


class TypeMismatch(StoreError):
    pass


class DuplicateDevice(RRError):
    pass


class StartupError(RRError):
    pass


class UnknownCallback(StartupError):
    pass


class RuntimeTrap(RRError):
    """Aborts a running program."""


class IntegrityFailure(RuntimeTrap):
    exit_code = 2

    def __init__(self, name, result=None):
        self.name = name
        self.result = result
        super().__init__(f"integrity failure: no majority among replicas of {name!r}")


class NotAnActuator(RuntimeTrap):
    exit_code = 3


class DivisionByZero(RuntimeTrap):
    exit_code = 4


class TickBudgetExceeded(RuntimeTrap):
    exit_code = 5
