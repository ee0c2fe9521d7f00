"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class AlignmentError(Exception):
    exit_code = 1


class ParseError(AlignmentError, ValueError):
    exit_code = 5

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class InfeasibleError(AlignmentError):
    """No perfect matching exists using only allowed pairs.

    ``rows`` is a set of row indices whose allowed columns are too few to
    cover them (a Hall's-condition violator), when the solver can name one.
    """

    exit_code = 2

    def __init__(self, message, rows=None):
        self.rows = sorted(rows) if rows is not None else None
        if self.rows is not None:
            message = f"{message} (unmatched row set: {self.rows})"
        super().__init__(message)


class NotATreeError(AlignmentError):
    exit_code = 3

    def __init__(self, clusters):
        self.clusters = list(clusters)
        super().__init__(
            f"cluster graph component contains a cycle: {self.clusters}"
        )


class BudgetExceededError(AlignmentError):
    """An enumeration would exceed its configured budget or cap."""

    exit_code = 4


class CapExceededError(BudgetExceededError):
    pass
