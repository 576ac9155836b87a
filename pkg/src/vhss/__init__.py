"""Two-server verifiable homomorphic secret sharing over Ring-LWE."""
from .errors import (DecodeError, DimensionError, DomainError, ParameterError,
                     ValidationError, VhssError)
from .params import Params, ParamRequest, derive_params, profile
from .ring import RingElement
from .sampling import RngHandle

__version__ = "0.1.0"

__all__ = [
    "DecodeError", "DimensionError", "DomainError", "ParameterError", "Params",
    "ParamRequest", "RingElement", "RngHandle", "ValidationError", "VhssError",
    "derive_params", "profile",
]
