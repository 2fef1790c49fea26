"""Exception types shared across the engines.

The CLI maps these onto exit codes: validation problems (bad inputs,
malformed scenarios) exit with 2, numerical failures during a run exit
with 3.
"""


class DomainError(ValueError):
    """An input violates a documented invariant of an operation."""


class ScenarioError(DomainError):
    """A scenario document is malformed; the message names the field path."""


class TruncationError(DomainError):
    """A Fock-space truncation is too small for the requested state."""


class IntegrationError(RuntimeError):
    """A numerical integration lost accuracy or produced a non-finite state."""
