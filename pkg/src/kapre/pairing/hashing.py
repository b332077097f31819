"""Hashing to scalars and variable-length masks.

Both functions absorb length-framed chunks into SHAKE-256 under a domain
tag, so distinct argument splits can never collide ("ab","c" vs "a","bc")
and the two roles can never cross (different tags).
"""

from __future__ import annotations

from hashlib import shake_256


def frame(part: bytes) -> bytes:
    """4-byte big-endian length prefix + payload."""
    return len(part).to_bytes(4, "big") + part


def hash_to_scalar(order: int, domain_tag: str, *parts: bytes) -> int:
    """Deterministic hash of the framed parts to [1, order-1].

    The XOF output is 16 bytes longer than the order so the mod-(order-1)
    reduction bias is negligible; the +1 shift keeps 0 out of the range,
    matching a Z_p^* codomain.
    """
    x = shake_256(frame(domain_tag.encode()) + b"".join(frame(p) for p in parts))
    nbytes = (order.bit_length() + 7) // 8 + 16
    return int.from_bytes(x.digest(nbytes), "big") % (order - 1) + 1


def mask_bytes(key_material: bytes, binder: bytes, out_len: int) -> bytes:
    """Deterministic out_len-byte XOR mask bound to both encodings."""
    x = shake_256(frame(b"H1") + frame(key_material) + frame(binder))
    return x.digest(out_len)
