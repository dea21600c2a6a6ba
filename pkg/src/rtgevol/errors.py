"""Exception hierarchy shared by every module."""


class RTGError(Exception):
    """Base class for all errors raised by this package."""


class RegexSyntaxError(RTGError, SyntaxError):
    def __init__(self, message, offset=None, text=None, line=None):
        self.message = message
        self.offset = offset
        self.text = text
        self.lineno = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        super().__init__(f"{message}" + (f" ({', '.join(where)})" if where else ""))

    def __str__(self):
        return self.args[0]


class ConflictingTerminal(RTGError):
    def __init__(self, nt, a, b):
        self.nt, self.a, self.b = nt, a, b
        super().__init__(f"non-terminal {nt} is used for two element types: {a} and {b}")


class EmptyLanguage(RTGError):
    pass


class NotReduced(RTGError):
    pass


class Unproductive(RTGError):
    def __init__(self, nt):
        self.nt = nt
        super().__init__(f"non-terminal {nt} generates no terminal tree")


class NotDefined(RTGError):
    """An edit operation applied outside its domain."""

    def __init__(self, kind, reason):
        self.kind, self.reason = kind, reason
        super().__init__(f"{kind} is not defined here: {reason}")


class DanglingReference(NotDefined):
    def __init__(self, kind, nt, user):
        self.nt, self.user = nt, user
        super().__init__(kind, f"{nt} still occurs in the rule of {user}")


class NotDefinedAt(RTGError):
    def __init__(self, index, op, cause):
        self.index, self.op, self.cause = index, op, cause
        super().__init__(f"operation {index} ({op}) is not defined: {cause.reason if isinstance(cause, NotDefined) else cause}")


class SchemaMismatch(RTGError):
    pass


class UnsupportedFeature(RTGError):
    pass


class InvalidDocument(RTGError):
    pass


class NoSolution(RTGError):
    pass
