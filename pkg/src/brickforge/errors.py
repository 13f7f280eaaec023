"""Exception types shared across the package."""


class BrickforgeError(Exception):
    """Base class for all package errors."""


class DomainError(BrickforgeError):
    """Two curves (or a curve and an operation) live on different domains."""


class FillingError(BrickforgeError):
    """A pair of simplices fills its domain, so no essential boundary exists."""


class CertificateError(BrickforgeError):
    """A distance certificate does not cover the vertices it is asked about."""


class NotComponentDomain(BrickforgeError):
    """The given subsurface is not a component domain of the given simplex."""


class BudgetExceeded(BrickforgeError):
    """A construction needed a curve outside the enumeration budget."""


class NonSaturable(BrickforgeError):
    """A slice cannot be extended to a saturated slice; the input is corrupt."""


class NotAscending(BrickforgeError):
    """A sequence of brick complexes is not ascending."""


class AbsorptionFailure(BrickforgeError):
    """A twist's affected region could not be absorbed into a delta region."""


class NonStabilizing(BrickforgeError):
    """A brick's embedding kept changing past its reported stabilization index."""


class MissingLabel(BrickforgeError):
    """A half-open brick has no end label."""


class NoTightGeodesic(BrickforgeError):
    """No tight geodesic could be certified within the enumeration budget."""


class IterationOverflow(BrickforgeError):
    """The decomposition pipeline ran more rounds than the complexity allows."""


class ELViolation(BrickforgeError):
    """Two simply degenerate bricks carry homotopic ending laminations."""


class MissingFNData(BrickforgeError):
    """A geometrically finite label lacks Fenchel-Nielsen data."""


class NotTorusInterface(BrickforgeError):
    """The tube meets the base part along an annulus, not a torus."""


class ObstructionSearchFailure(BrickforgeError):
    """No finite obstructor set was found within the enumeration bound."""


class ParseError(BrickforgeError):
    """A document failed to parse against the schema."""
