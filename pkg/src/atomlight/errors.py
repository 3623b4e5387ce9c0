"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a documented validity guard (bad quantum numbers,
    relativistic momenta, on-light-cone evaluation, ...)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to reach its requested accuracy."""
