"""Exception types raised by the clockens package."""


class ClockensError(Exception):
    """Base class for all package-specific errors."""


class NonHermitianInput(ClockensError):
    """Matrix handed to a Hermitian-only routine is not Hermitian."""


class ConvergenceFailure(ClockensError):
    """Eigensolver exhausted its iteration budget."""


class DimensionOverflow(ClockensError):
    """Requested operator exceeds the dense dimension cap."""


class DimensionMismatch(ClockensError):
    """Vector or matrix dimensions are inconsistent."""


class InvalidSpec(ClockensError):
    """Model specification violates its parameter bounds."""


class InvalidGrid(ClockensError):
    """Grid parameters are unusable (empty, non-positive, off-lattice)."""


class AliasingError(ClockensError):
    """System spectrum does not fit inside the clock momentum window."""


class QuadratureUnderresolved(ClockensError):
    """Alpha-quadrature node spacing cannot resolve the constraint spectrum."""


class GridTooCoarse(ClockensError):
    """Energy grid too coarse or too narrow for the requested transform."""


class StepSizeTooLarge(ClockensError):
    """Integrator step produced an unacceptable constraint drift."""


class NonMonotoneTime(ClockensError):
    """Hamilton action requested on a trajectory with non-monotone time."""


class ShootingDiverged(ClockensError):
    """Boundary-value shooting failed to converge within its budget."""


class EnergyBelowBarrier(ClockensError):
    """No on-shell momentum exists at the requested launch point."""


class ConfigInvalid(ClockensError):
    """Run configuration failed schema validation."""
