"""Exception hierarchy shared by all modules.

Each class carries the process exit code the command-line front end uses
when the error escapes a subcommand.
"""


class RowQuboError(Exception):
    exit_code = 1


class UsageError(RowQuboError, ValueError):
    """Bad parameters: k out of range, invalid penalties or schedules."""

    exit_code = 2


class ParseError(RowQuboError, ValueError):
    """Malformed input text (trace file or interchange document)."""

    exit_code = 3

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class TraceFormatError(ParseError):
    """Binary lines of inconsistent length."""


class AddressOverflowError(ParseError):
    """A hex value that does not fit the declared width."""


class CapacityError(RowQuboError):
    """A problem too large for an exhaustive method."""

    exit_code = 4


class IntegrityError(RowQuboError):
    """Two independent computations disagree; always an internal bug."""

    exit_code = 5


class InfeasibleResult(RowQuboError):
    """A backend returned an assignment that does not pick exactly k sets."""

    exit_code = 6


class DomainError(RowQuboError, ValueError):
    """An argument outside the operation's domain (index range, length)."""

    exit_code = 2
