"""Exception types shared across the package."""


class KappaForgeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KappaForgeError, ValueError):
    """An argument lies outside an operation's mathematical domain."""


class AlphabetMismatchError(DomainError):
    """Polynomials over different variable families were combined."""


class DependencyError(KappaForgeError):
    """A constraint touched a coefficient that is not available yet."""


class ResourceLimitError(KappaForgeError):
    """A configured enumeration bound was exceeded."""


class CacheFormatError(KappaForgeError):
    """A cache file has an unknown or corrupt format."""
