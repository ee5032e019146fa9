"""Exception types raised by the segmentation toolkit."""


class RowcutError(Exception):
    """Base class for all domain errors."""


class MalformedHeader(RowcutError):
    """Image header is missing, truncated, or inconsistent."""


class TruncatedPayload(RowcutError):
    """Image raster holds fewer samples than the header promises."""


class OutOfBounds(RowcutError):
    """A point lies outside the raster it is drawn onto."""


class EmptyImage(RowcutError):
    """Operation requires at least one ink pixel."""


class NoBands(RowcutError):
    """No profile run clears the band threshold."""


class DegenerateBands(RowcutError):
    """Valley does not lie strictly between the two bands it separates."""


class DetachedStart(RowcutError):
    """Wall trace started on a pixel with no adjacent ink."""


class StepBudgetExceeded(RowcutError):
    """Wall trace ran out of steps before its stop condition held.

    Carries the partial path walked so far.
    """

    def __init__(self, message: str, path=None):
        super().__init__(message)
        self.path = list(path) if path is not None else []


class DetourAborted(RowcutError):
    """Wall trace entered a region its abort predicate forbids.

    Carries the partial path walked so far.
    """

    def __init__(self, message: str, path=None):
        super().__init__(message)
        self.path = list(path) if path is not None else []


class UnknownLabel(RowcutError):
    """Component label not present in the labeling."""


class OutOfRaster(RowcutError):
    """A border leaves the vertical bounds of the image."""


class EmptyBand(RowcutError):
    """Band has no component intersecting its core zone."""


class BordersCross(RowcutError):
    """Two borders share a pixel or swap vertical order."""


class SizeMismatch(RowcutError):
    """Two rasters that must be congruent have different shapes."""


class BadRowIndex(RowcutError):
    """Row index outside [0, row_count)."""


class SpecTooTight(RowcutError):
    """Synthetic page geometry cannot fit the requested parameters."""
