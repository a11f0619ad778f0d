"""Exception hierarchy shared by the solvers, oracles and CLI."""


class NvdlabError(Exception):
    """Base class for all package errors."""


class ConfigError(NvdlabError, ValueError):
    """Invalid problem set-up or run configuration."""


class DomainError(NvdlabError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class NumericalFailure(NvdlabError, RuntimeError):
    """A time-marching run produced a non-finite or inadmissible state."""


class PositivityFailure(NumericalFailure):
    """Density, pressure or depth left the admissible range."""


class OracleFailure(NvdlabError, RuntimeError):
    """A reference solution could not be evaluated to the required accuracy."""
