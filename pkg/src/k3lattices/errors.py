"""Exception types shared across the package."""


class LatticeError(Exception):
    """Base class for every error raised by this package."""


class NonSquareError(LatticeError):
    """A square matrix was required."""


class DegenerateError(LatticeError):
    """The Gram matrix has determinant zero."""


class NotEvenError(LatticeError):
    """An even lattice (or even self-pairing) was required."""


class NotIntegralError(LatticeError):
    """A pairing that must be integral is not."""


class ZeroScaleError(LatticeError):
    """Rescaling by zero is not allowed."""


class NoSolutionError(LatticeError):
    """The linear system has no integer solution."""


class NotDefiniteError(LatticeError):
    """A definite lattice was required."""


class BudgetExceededError(LatticeError):
    """An enumeration or search ran past its configured budget."""


class GlueRejectedError(LatticeError):
    """A glue vector fails the integrality or evenness conditions."""


class UnknownNameError(LatticeError):
    """Unrecognised catalog lattice name."""


class SignatureObstructionError(LatticeError):
    """The signature rules out any embedding; this verdict is definitive."""


class InvalidDegreeError(LatticeError):
    """Polarization degrees must be even and positive."""


class OddSelfIntersectionError(LatticeError):
    """Divisor self-intersections on a K3 surface are even."""


class InconsistentInputError(LatticeError):
    """Mutually contradictory inputs were supplied."""


class InvalidSpecError(LatticeError):
    """A Todorov pair or glue code violates the admissibility conditions."""
