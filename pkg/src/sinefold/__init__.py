"""Binary digit-sum product identities for sine and cosine products."""
from .digits import bits, digit_sum, signed_digits, thue_morse, u_value
from .errors import (DomainError, NumericRangeError, PrecisionError, ResourceError,
                     SearchFailure, SinefoldError)

__version__ = "0.1.0"

__all__ = [
    "bits", "digit_sum", "signed_digits", "thue_morse", "u_value",
    "DomainError", "NumericRangeError", "PrecisionError", "ResourceError",
    "SearchFailure", "SinefoldError", "__version__",
]
