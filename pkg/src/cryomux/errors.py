"""Exception and warning types shared across the package.

Most failures are input problems and subclass :class:`InputError` so that the
command line front end can map them to a single exit code. Numerical
breakdowns that are not the caller's fault get their own branch.
"""

from __future__ import annotations


class CryomuxError(Exception):
    """Base class for every error raised by this package."""


class InputError(CryomuxError, ValueError):
    """Malformed or out-of-domain input (bad value, bad file, bad grid)."""


class SelectionError(InputError):
    """Port selection problem: decode out of range, register not one-hot."""


class OutOfRangeError(InputError):
    """Lookup outside the domain of a tabulated quantity."""


class DispersiveLimitError(InputError):
    """Cavity-resonator detuning is zero, the dispersive map is undefined."""


class NonphysicalValueError(InputError):
    """Inputs that imply negative loss, negative population or similar."""


class WindowError(InputError):
    """A resonance cannot be resolved inside the supplied frequency window."""


class UnderdeterminedError(InputError):
    """Fewer data points than free parameters."""


class BudgetError(InputError):
    """Loss budget components are inconsistent with the stated total."""


class SingularNetworkError(CryomuxError, ArithmeticError):
    """A network conversion hit an exactly singular denominator."""


class SingularFitError(CryomuxError, ArithmeticError):
    """Normal equations stayed singular after the damping limit was reached."""


class ClampWarning(UserWarning):
    """An element value was clamped to the degenerate-magnitude limit."""


class DispersiveValidityWarning(UserWarning):
    """Detuning is not large against the linewidths; dispersive formulas
    are being stretched."""


class BandEdgeWarning(UserWarning):
    """A sweep extends beyond a filter passband."""
