"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid experiment configuration or malformed input file."""


class ResourceCapError(RuntimeError):
    """A desk-scale resource cap would be exceeded."""


class IntegrityError(RuntimeError):
    """An internal invariant (norm, closure, table consistency) failed."""
