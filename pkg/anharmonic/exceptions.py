class SpectrumError(Exception):
    """Base class for every failure raised by the library."""


class ComplexIndicialError(SpectrumError):
    """1 + 4*A_{-2} < 0: the Frobenius exponents at the origin are complex."""


class DegenerateIndicialError(SpectrumError):
    """1 + 4*A_{-2} = 0: logarithmic solutions fall outside the power-series ansatz."""


class InconsistentRecurrenceError(SpectrumError):
    """The leading factor of a recurrence vanished while its right-hand side did not."""

    def __init__(self, index: int, rhs: float):
        super().__init__(
            f"recurrence leading factor vanishes at n={index} but right-hand side is {rhs!r}"
        )
        self.index = index
        self.rhs = rhs


class GammaPoleError(SpectrumError):
    """Gamma function evaluated at a non-positive integer."""


class RootRefinementError(SpectrumError):
    pass


class MaxIterationsError(RootRefinementError):
    pass


class LostBracketError(RootRefinementError):
    """W no longer changes sign across the bracket (truncation too low)."""


class InsufficientRootsError(SpectrumError):
    def __init__(self, requested: int, found: int, e_max: float):
        super().__init__(
            f"requested {requested} roots but only {found} found below E={e_max}"
        )
        self.requested = requested
        self.found = found


class OracleCutoffError(SpectrumError):
    """The shooting domain is too short for the requested energies."""


class OracleBracketError(SpectrumError):
    """Node counting never reached the requested level."""


class JobSpecError(SpectrumError):
    """Invalid command-line or config-file input."""
