"""
Error hierarchy shared by every service
"""

from typing import Optional


class O2GasketError(Exception):
    """Base class for all toolkit errors"""


class DomainError(O2GasketError, ValueError):
    """Argument outside the domain of a special function or series"""


class PreconditionError(O2GasketError, ValueError):
    """Operation called with inputs that violate its precondition"""


class TruncationFailureError(O2GasketError):
    """A truncated series could not reach the requested tolerance"""

    def __init__(self, message: str, achieved: Optional[float] = None, terms: Optional[int] = None):
        super().__init__(message)
        self.achieved = achieved
        self.terms = terms


class MomentExcessError(O2GasketError):
    """First moment of the ring sequence exceeds one"""

    def __init__(self, first_moment: float):
        super().__init__(f"first moment {first_moment!r} exceeds 1")
        self.first_moment = first_moment


class DegenerateDistributionError(O2GasketError):
    """The step distribution collapses to the Dirac mass at zero"""

    def __init__(self, nu_zero: float):
        super().__init__(f"step distribution is degenerate: nu(0) = {nu_zero!r}")
        self.nu_zero = nu_zero


class NegativityError(O2GasketError):
    """Some value of the step distribution is negative"""

    def __init__(self, k: int, value: float):
        super().__init__(f"nu({k}) = {value!r} is negative")
        self.k = k
        self.value = value


class SupportTruncationError(O2GasketError):
    """Sampler support cut removes too much probability mass"""

    def __init__(self, truncated_mass: float, limit: float):
        super().__init__(f"truncated mass {truncated_mass:.3e} exceeds limit {limit:.1e}")
        self.truncated_mass = truncated_mass
        self.limit = limit


class LadderAnomalyError(O2GasketError):
    """Ascending-ladder generating function has a negative coefficient"""

    def __init__(self, index: int, value: float):
        super().__init__(f"ascending ladder coefficient {index} is negative: {value!r}")
        self.index = index
        self.value = value


class CalibrationError(O2GasketError):
    """Loop-equation convention did not calibrate against the closed-form family"""


class UsageError(O2GasketError):
    """Invalid command-line usage"""

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message if flag is None else f"{flag}: {message}")
        self.flag = flag
