"""Exception hierarchy shared by all evaluators."""

from __future__ import annotations


class FdwaveError(Exception):
    """Base class for every error raised by the package."""


class DomainError(FdwaveError, ValueError):
    """Parameters or arguments outside the admissible range."""


class NonConvergence(FdwaveError):
    """No available method reached the requested tolerance.

    ``best`` carries the most accurate estimate that was obtained (an
    :class:`~fdwave.result.EvalResult`) or ``None``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class EmptyStrip(FdwaveError):
    """A Mellin symbol has no vertical strip of analyticity."""


class DoublePoleError(FdwaveError):
    """Two numerator gamma families share a pole on the expansion side."""


class EmptyFamily(FdwaveError):
    """No numerator gamma term opens the requested expansion side."""


class PoleError(FdwaveError, ValueError):
    """Gamma function evaluated at a non-positive integer."""


class SlowDecay(FdwaveError):
    """A Mellin-Barnes integrand decays too slowly for truncated quadrature."""


class SingularAtOrigin(FdwaveError):
    """The fundamental solution is unbounded at x = 0 for these parameters."""


class IncompatiblePair(FdwaveError, ValueError):
    """A subordination kernel was combined with the wrong base solution."""
