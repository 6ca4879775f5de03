"""Exception types shared across the package."""


class PhaseLocError(Exception):
    """Base class for all phaseloc errors."""


class DimensionMismatch(PhaseLocError):
    """Operands have incompatible lengths."""


class ZeroReference(PhaseLocError):
    """Relative error requested against a zero reference signal."""


class BadSparsity(PhaseLocError):
    """Sparsity level outside [1, n]."""


class DimensionTooSmall(PhaseLocError):
    """Construction needs a larger ambient dimension."""


class BadSupport(PhaseLocError):
    """Support index list is too short, out of range, or repeats indices."""


class UnstructuredVector(PhaseLocError):
    """Operation requires structured measurement vectors, got a dense one."""


class BadDimension(PhaseLocError):
    """Lateration check only supports d in {1, 2}."""


class GraphMismatch(PhaseLocError):
    """Frameworks live on different graphs or vertex sets."""


class CollinearAnchors(PhaseLocError):
    """The two anchor candidates are collinear with the origin."""


class NonpositiveMagnitude(PhaseLocError):
    """First anchor intensity must be strictly positive."""


class SingularSystem(PhaseLocError):
    """Per-sensor 2x2 system has a (near-)zero determinant."""


class MissingMeasurement(PhaseLocError):
    """A required measurement is absent from the supplied data."""


class Underdetermined(PhaseLocError):
    """Iterative solver needs at least as many measurements as unknowns."""
