"""Exception types shared across the package."""


class WqpeError(Exception):
    """Base class for all errors raised by wqpe."""


class DimensionMismatchError(WqpeError):
    pass


class NotHermitianError(WqpeError):
    pass


class NotUnitaryError(WqpeError):
    pass


class BranchCutError(WqpeError):
    """A unitary has an eigenphase too close to the -pi branch cut."""


class AmplitudeCapError(WqpeError):
    """Requested object exceeds the dense-storage amplitude cap."""


class AliasingError(WqpeError):
    """Scaled eigenphases leave the non-aliasing range."""


class FilteredToNothingError(WqpeError):
    """Post-selection probability underflowed to zero."""


class ZeroOverlapError(WqpeError):
    """Initial state has no overlap with the target ground state."""


class GapTooSmallError(WqpeError):
    """Bound calculator denominator is non-positive for this gap."""


class ScanFailedError(WqpeError):
    """Energy scan exhausted its range without a successful round."""


class DegenerateGroundStateError(WqpeError):
    pass
