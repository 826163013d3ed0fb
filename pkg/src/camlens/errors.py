"""Exception types shared across the package."""


class CamlensError(Exception):
    """Base class for all camlens errors."""


class ShapeError(CamlensError):
    """An operand's shape is incompatible with the requested operation."""


class ManifestError(CamlensError):
    """A model manifest failed to parse or validate."""


class WeightFormatError(CamlensError):
    """The binary weight blob is malformed."""


class CamCompatibilityError(CamlensError):
    """The model architecture cannot produce class activation maps."""


class DecodeError(CamlensError):
    """Image bytes could not be decoded."""
