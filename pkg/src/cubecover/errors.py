"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input: files, flags, parameters, or scalar strings."""


class EmptyCollectionError(ValueError):
    """Operation requires a nonempty collection."""


class CapExceededError(ValueError):
    """Instance size exceeds the configured exact-computation cap."""


class NotDisjointError(ValueError):
    """Selection indices reference intersecting cubes."""


class VerificationError(RuntimeError):
    """A self-check that must hold by construction failed."""
