"""Exception types shared across the engine."""


class SemWikiError(Exception):
    """Base class for all engine errors."""


class UnregisteredGraphError(SemWikiError):
    def __init__(self, graph):
        super().__init__(f"graph not registered: {graph}")
        self.graph = graph


class ParseError(SemWikiError):
    """Syntax error in RDF input, query text or rule catalogs."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class UnknownPrefixError(ParseError):
    pass


class PropertyKindConflictError(SemWikiError):
    """A wiki property was used with a value incompatible with its
    previously declared kind (object- vs datatype-valued)."""

    def __init__(self, prop, declared, used):
        super().__init__(
            f"property {prop} declared {declared} but used as {used}")
        self.property = prop
        self.declared = declared
        self.used = used


class FederationError(SemWikiError):
    pass


class MalformedResponseError(FederationError):
    pass


class InvalidIntervalError(SemWikiError):
    pass


class PageNotFoundError(SemWikiError):
    pass


class UpdateNotAllowedError(SemWikiError):
    """Update-form query sent to the read-only endpoint."""


class DataDirLockedError(SemWikiError):
    pass
