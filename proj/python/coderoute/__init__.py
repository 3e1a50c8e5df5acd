from ._coderoute import (
    CapabilityError,
    Error,
    InternalError,
    SpanProgram,
    Tape,
    ValidationError,
    library_names,
)

__all__ = [
    "CapabilityError",
    "Error",
    "InternalError",
    "SpanProgram",
    "Tape",
    "ValidationError",
    "library_names",
]
