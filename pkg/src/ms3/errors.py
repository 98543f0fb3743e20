"""Exception hierarchy shared by the library and the command line."""


class MS3Error(ValueError):
    """Base class for every error raised by this package."""


class ValidationError(MS3Error):
    """A presentation violates structural invariants.

    ``report`` holds the full list of violations.
    """

    def __init__(self, report):
        self.report = list(report)
        lines = "; ".join(str(v) for v in self.report[:5])
        more = "" if len(self.report) <= 5 else f" (+{len(self.report) - 5} more)"
        super().__init__(f"invalid presentation: {lines}{more}")


class InvalidGraph(MS3Error):
    """An MS-graph or framing violates its invariants."""


class InvalidOperation(MS3Error):
    """A framing operation was requested on an inadmissible pair of edges."""


class DomainError(MS3Error):
    """A torus point lies outside the domain of the first-return map."""


class NoReturnError(DomainError):
    """The point lies on the stable manifold (z = 0) and never leaves the handle."""


class ParseError(MS3Error):
    """Syntax or semantic error in a flow document, with its location."""

    def __init__(self, message, line, column=1, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")
