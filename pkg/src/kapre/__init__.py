"""kapre: key-aggregate proxy re-encryption.

A delegator encrypts files under per-type second-level ciphertexts; one
constant-size re-encryption key (two group elements, whatever the set of
types it covers) lets a semi-trusted proxy convert any authorized type to a
first-level ciphertext for a delegatee, without ever seeing plaintext.

    >>> from kapre import core
    >>> par = core.setup("ss512", l=32)
    >>> pk_a, sk_a = core.keygen(par, n=10)
    >>> pk_b, sk_b = core.keygen(par, n=4)
    >>> rk = core.rekeygen(par, {1, 3, 5, 8, 9}, sk_a, pk_a, pk_b)
    >>> ct = core.enc2(par, pk_a, b"\\x00" * 32, rho=3)
    >>> ct1 = core.reenc(par, pk_a, rk, ct)
    >>> core.dec1(par, sk_b, ct1) == b"\\x00" * 32
    True
"""

from .core import (
    InvalidCiphertextError,
    Level1Ciphertext,
    Level2Ciphertext,
    Params,
    PolicyError,
    PublicKey,
    ReKey,
    RejectedCiphertext,
    SchemeError,
    SecretKey,
    TagMismatchError,
    aggregate,
    dec1,
    dec2,
    enc1,
    enc2,
    keygen,
    reenc,
    rekeygen,
    setup,
    verify2,
    verify2_diagnostics,
)
from .pairing import DeterministicRandom, SystemRandom, get_context

__version__ = "0.1.0"

__all__ = [
    "InvalidCiphertextError",
    "Level1Ciphertext",
    "Level2Ciphertext",
    "Params",
    "PolicyError",
    "PublicKey",
    "ReKey",
    "RejectedCiphertext",
    "SchemeError",
    "SecretKey",
    "TagMismatchError",
    "aggregate",
    "dec1",
    "dec2",
    "enc1",
    "enc2",
    "keygen",
    "reenc",
    "rekeygen",
    "setup",
    "verify2",
    "verify2_diagnostics",
    "DeterministicRandom",
    "SystemRandom",
    "get_context",
    "__version__",
]
