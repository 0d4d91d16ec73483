"""Exception types shared across the package."""


class PeierlsError(Exception):
    """Base class for all package-specific errors."""


class SiteOutsideWindow(PeierlsError):
    """A site was requested outside the finite window it belongs to."""


class EmptyClusterError(PeierlsError):
    """An operation that needs a nonempty cluster received an empty one."""


class CapExceeded(PeierlsError):
    """An enumeration would exceed its configured safety limit."""


class IncompletenessError(PeierlsError):
    """A cluster-size cap cannot guarantee that all requested contours were seen."""


class NoRayIntersection(PeierlsError):
    """A contour does not meet the positive horizontal ray, so it encloses no origin."""


class ContourError(PeierlsError):
    """A site set violates the structural guarantees expected of an outer contour."""


class DivergentSeries(PeierlsError):
    """The geometric contour series does not converge at the requested concentration."""


class InsufficientData(PeierlsError):
    """Not enough enumerated lengths to form the requested estimate."""
