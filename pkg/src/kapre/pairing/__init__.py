"""Symmetric bilinear pairing e: G x G -> G_T over prime-order groups."""

from .context import (
    InvalidElementError,
    PairingContext,
    SourceElement,
    TargetElement,
    get_context,
)
from .hashing import frame, hash_to_scalar, mask_bytes
from .params import CURVES, DEFAULT_CURVE
from .rng import DeterministicRandom, RandomSource, SystemRandom

__all__ = [
    "CURVES",
    "DEFAULT_CURVE",
    "DeterministicRandom",
    "InvalidElementError",
    "PairingContext",
    "RandomSource",
    "SourceElement",
    "SystemRandom",
    "TargetElement",
    "frame",
    "get_context",
    "hash_to_scalar",
    "mask_bytes",
]
