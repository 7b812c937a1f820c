"""convec: exact-arithmetic tools for convolutional codes over erasure channels."""

__version__ = "0.1.0"

from .gf import field, Field, Element  # noqa: F401
