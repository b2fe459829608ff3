"""Exceptions raised by the fingerprint library."""


class FingerprintError(Exception):
    """Base class for every library error"""


class ImageFormatError(FingerprintError, ValueError):
    """Text image is malformed (header, ragged rows, color range)"""


class GeometryError(FingerprintError, ValueError):
    """Rectangle or square lies outside the image"""


class SizeGuardError(FingerprintError):
    """Brute-force oracle refused an image above the size guard"""


class SignatureCollisionError(FingerprintError):
    """Distinct fingerprints kept colliding under every tried seed"""


class IndexFormatError(FingerprintError):
    """Index file is truncated, corrupted or of an unknown version"""
