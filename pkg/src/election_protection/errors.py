"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can map
failures to exit statuses and documents can report them verbatim.
"""


class ProtectionError(ValueError):
    """Base error. ``code`` is one of the ``E_*`` identifiers below."""

    def __init__(self, code, message, field=None):
        super().__init__(f"{code}: {message}" + (f" (at {field})" if field else ""))
        self.code = code
        self.message = message
        self.field = field


class GuardError(ProtectionError):
    """An enumeration would exceed its configured size guard."""

    def __init__(self, message, field=None):
        super().__init__("E_GUARD", message, field)


class DomainError(ProtectionError):
    """An instance lies outside the domain a specialised algorithm accepts."""

    def __init__(self, message, field=None):
        super().__init__("E_DOMAIN", message, field)


class PreconditionError(ProtectionError):
    """A reduction's source instance violates the construction's precondition."""

    def __init__(self, message, field=None):
        super().__init__("E_PRECOND", message, field)


E_STRUCT = "E_STRUCT"
E_PERM = "E_PERM"
E_ALPHA = "E_ALPHA"
E_WEIGHT = "E_WEIGHT"
E_PRICE = "E_PRICE"
E_BUDGET = "E_BUDGET"
E_MODE = "E_MODE"
E_TRIVIAL = "E_TRIVIAL"
E_KEY = "E_KEY"
E_PARSE = "E_PARSE"
W_WINNER = "W_WINNER"
