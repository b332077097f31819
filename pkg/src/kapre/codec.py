"""Bit-exact serialization for key material and ciphertexts.

Envelope layout (all integers big-endian):

    magic   5 bytes  "KAPRE"
    version 1 byte   0x01
    kind    1 byte   params=0x01 public-key=0x02 secret-key=0x03
                     rekey=0x04 ct2=0x05 ct1=0x06
    body    length-prefixed fields in declaration order

Every field carries a 4-byte length prefix (u32 values are written as a
4-byte field), and every body starts with the curve name, so decoding is
self-describing.  Decoding is strict: unknown magic/version/kind, short
reads, length mismatches and trailing bytes are all typed errors, and every
group element is subgroup-validated, so the scheme layer never sees an
invalid element.  Ciphertext bodies additionally carry an 8-byte params
fingerprint and an 8-byte producer key hint so mismatched parameter sets
fail fast.

The armored form wraps the binary envelope in base64 between
``-----BEGIN KAPRE <KIND>-----`` / ``-----END KAPRE <KIND>-----`` lines.
"""

from __future__ import annotations

import base64
import binascii
import io
from hashlib import sha256

from .core import (
    Level1Ciphertext,
    Level2Ciphertext,
    Params,
    PublicKey,
    ReKey,
    SecretKey,
)
from .pairing import (
    InvalidElementError,
    PairingContext,
    SourceElement,
    TargetElement,
    get_context,
)

MAGIC = b"KAPRE"
VERSION = 0x01

KIND_PARAMS = 0x01
KIND_PUBLIC_KEY = 0x02
KIND_SECRET_KEY = 0x03
KIND_REKEY = 0x04
KIND_CT2 = 0x05
KIND_CT1 = 0x06

KIND_NAMES = {
    KIND_PARAMS: "params",
    KIND_PUBLIC_KEY: "public-key",
    KIND_SECRET_KEY: "secret-key",
    KIND_REKEY: "rekey",
    KIND_CT2: "ct2",
    KIND_CT1: "ct1",
}
KIND_BY_NAME = {v: k for k, v in KIND_NAMES.items()}

FINGERPRINT_LEN = 8
ZERO_HINT = b"\x00" * FINGERPRINT_LEN

# decode-time resource caps: fields beyond these are rejected, not allocated
MAX_FIELD_LEN = 1 << 20
MAX_TYPE_COUNT = 1 << 16


class DecodeError(ValueError):
    """Base class: the input is not a well-formed envelope."""


class BadMagic(DecodeError):
    pass


class BadVersion(DecodeError):
    pass


class BadKind(DecodeError):
    pass


class Truncated(DecodeError):
    pass


class TrailingGarbage(DecodeError):
    pass


class InvalidElement(DecodeError):
    """An embedded group element failed subgroup/encoding validation."""


class MalformedBody(DecodeError):
    """Structurally valid envelope whose body violates its kind's layout."""


class UnknownCurve(DecodeError):
    pass


# ---------------------------------------------------------------------------
# primitive writers/readers


def _w_bytes(buf: io.BytesIO, data: bytes) -> None:
    buf.write(len(data).to_bytes(4, "big"))
    buf.write(data)


def _w_u32(buf: io.BytesIO, value: int) -> None:
    _w_bytes(buf, value.to_bytes(4, "big"))


def _w_str(buf: io.BytesIO, s: str) -> None:
    _w_bytes(buf, s.encode())


class _Reader:
    def __init__(self, data: bytes):
        self._data = data
        self._off = 0

    def take(self, k: int) -> bytes:
        if self._off + k > len(self._data):
            raise Truncated("unexpected end of envelope")
        out = self._data[self._off : self._off + k]
        self._off += k
        return out

    def field(self) -> bytes:
        n = int.from_bytes(self.take(4), "big")
        if n > MAX_FIELD_LEN:
            raise MalformedBody(f"field length {n} exceeds cap")
        return self.take(n)

    def u32(self) -> int:
        f = self.field()
        if len(f) != 4:
            raise MalformedBody("bad integer field width")
        return int.from_bytes(f, "big")

    def done(self) -> None:
        if self._off != len(self._data):
            raise TrailingGarbage(f"{len(self._data) - self._off} trailing bytes")


def _r_str(r: _Reader) -> str:
    try:
        return r.field().decode()
    except UnicodeDecodeError as e:
        raise MalformedBody("bad string field") from e


def _r_source(r: _Reader, ctx: PairingContext) -> SourceElement:
    try:
        return SourceElement.deserialize(ctx, r.field())
    except InvalidElementError as e:
        raise InvalidElement(str(e)) from None


def _r_target(r: _Reader, ctx: PairingContext) -> TargetElement:
    try:
        return TargetElement.deserialize(ctx, r.field())
    except InvalidElementError as e:
        raise InvalidElement(str(e)) from None


def _w_scalar(buf: io.BytesIO, ctx: PairingContext, s: int) -> None:
    _w_bytes(buf, s.to_bytes(ctx.scalar_bytes, "big"))


def _r_scalar(r: _Reader, ctx: PairingContext, nonzero: bool = False) -> int:
    f = r.field()
    if len(f) != ctx.scalar_bytes:
        raise MalformedBody("bad scalar field width")
    v = int.from_bytes(f, "big")
    if v >= ctx.order or (nonzero and v == 0):
        raise MalformedBody("scalar out of range")
    return v


def _r_curve(r: _Reader, ctx: PairingContext | None) -> PairingContext:
    name = _r_str(r)
    try:
        found = get_context(name)
    except ValueError:
        raise UnknownCurve(f"unknown curve {name!r}") from None
    if ctx is not None and found.name != ctx.name:
        raise MalformedBody(f"curve {name!r} does not match expected {ctx.name!r}")
    return found


# ---------------------------------------------------------------------------
# encode


def _envelope(kind: int, body: bytes) -> bytes:
    return MAGIC + bytes([VERSION, kind]) + body


def encode_rekey_token(rk: ReKey) -> bytes:
    """The cryptographic section of a re-encryption key: exactly two source
    elements, independent of |S| and n.  Embedded as-is in the envelope."""
    return rk.r1.serialize() + rk.r2.serialize()


def params_fingerprint(par: Params) -> bytes:
    """8-byte identifier of a parameter set (hash of its envelope)."""
    return sha256(encode(par)).digest()[:FINGERPRINT_LEN]


def key_fingerprint(pk: PublicKey) -> bytes:
    """8-byte identifier of a public key (hash of its envelope)."""
    return sha256(encode(pk)).digest()[:FINGERPRINT_LEN]


def encode(
    obj: Params | PublicKey | SecretKey | ReKey | Level2Ciphertext | Level1Ciphertext,
    *,
    params_fp: bytes = ZERO_HINT,
    key_hint: bytes = ZERO_HINT,
    ctx: PairingContext | None = None,
) -> bytes:
    """Canonical envelope bytes for any domain object.

    params_fp/key_hint apply to ciphertext kinds only (8 bytes each).  ctx
    names the curve for SecretKey envelopes (secret keys are bare scalars);
    every registered curve shares the same group order, so the default is
    interchangeable, but the keystore passes its params context explicitly.
    """
    buf = io.BytesIO()
    if isinstance(obj, Params):
        kind = KIND_PARAMS
        _w_str(buf, obj.ctx.name)
        _w_u32(buf, obj.l)
        for el in (obj.g, obj.d, obj.u, obj.v, obj.w):
            _w_bytes(buf, el.serialize())
        _w_bytes(buf, obj.Z.serialize())
    elif isinstance(obj, PublicKey):
        kind = KIND_PUBLIC_KEY
        ctx = obj.pk1.ctx
        _w_str(buf, ctx.name)
        _w_u32(buf, obj.n)
        _w_bytes(buf, obj.pk1.serialize())
        _w_bytes(buf, obj.pk2.serialize())
        _w_u32(buf, len(obj.delta))
        for el in obj.delta:
            _w_bytes(buf, el.serialize())
    elif isinstance(obj, SecretKey):
        kind = KIND_SECRET_KEY
        ctx = ctx or get_context()
        _w_str(buf, ctx.name)
        _w_u32(buf, obj.n)
        for s in (obj.a1, obj.a2, obj.a3):
            _w_scalar(buf, ctx, s)
    elif isinstance(obj, ReKey):
        kind = KIND_REKEY
        _w_str(buf, obj.r1.ctx.name)
        _w_bytes(buf, encode_rekey_token(obj))
        _w_u32(buf, len(obj.S))
        for v in sorted(obj.S):
            _w_u32(buf, v)
    elif isinstance(obj, Level2Ciphertext):
        kind = KIND_CT2
        ctx = obj.c1.ctx
        _w_str(buf, ctx.name)
        _check_hint(params_fp)
        _check_hint(key_hint)
        _w_bytes(buf, params_fp)
        _w_bytes(buf, key_hint)
        _w_u32(buf, obj.rho)
        _w_scalar(buf, ctx, obj.k)
        for el in (obj.c1, obj.c2, obj.c3, obj.c4):
            _w_bytes(buf, el.serialize())
        _w_bytes(buf, obj.c5)
        for el in (obj.c6, obj.c7, obj.c8):
            _w_bytes(buf, el.serialize())
        _w_bytes(buf, obj.c9)
    elif isinstance(obj, Level1Ciphertext):
        kind = KIND_CT1
        ctx = obj.c1p.ctx
        _w_str(buf, ctx.name)
        _check_hint(params_fp)
        _check_hint(key_hint)
        _w_bytes(buf, params_fp)
        _w_bytes(buf, key_hint)
        _w_scalar(buf, ctx, obj.k)
        _w_bytes(buf, obj.c1p.serialize())
        _w_bytes(buf, obj.c2p.serialize())
        _w_bytes(buf, obj.c3p)
        _w_bytes(buf, obj.c4p.serialize())
        _w_bytes(buf, obj.c5p.serialize())
        _w_bytes(buf, obj.c6p)
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")
    return _envelope(kind, buf.getvalue())


def _check_hint(h: bytes) -> None:
    if len(h) != FINGERPRINT_LEN:
        raise ValueError(f"fingerprint/hint must be {FINGERPRINT_LEN} bytes")


# ---------------------------------------------------------------------------
# decode


class Decoded:
    """Result of decode(): the object plus envelope metadata."""

    __slots__ = ("kind", "obj", "params_fp", "key_hint")

    def __init__(self, kind: str, obj, params_fp: bytes = ZERO_HINT, key_hint: bytes = ZERO_HINT):
        self.kind = kind
        self.obj = obj
        self.params_fp = params_fp
        self.key_hint = key_hint

    def __repr__(self):
        return f"<Decoded {self.kind}>"


def decode(data: bytes, ctx: PairingContext | None = None) -> Decoded:
    """Parse and validate an envelope.

    ctx, when given, must match the curve named in the body (pass the
    keystore's context to refuse cross-curve material).  All group elements
    are subgroup-validated; failures raise DecodeError subclasses, never
    anything else.
    """
    if len(data) < 7:
        raise Truncated("shorter than any envelope")
    if data[:5] != MAGIC:
        raise BadMagic("not a KAPRE envelope")
    if data[5] != VERSION:
        raise BadVersion(f"unsupported version {data[5]}")
    kind = data[6]
    if kind not in KIND_NAMES:
        raise BadKind(f"unknown kind byte 0x{kind:02x}")
    r = _Reader(data[7:])

    if kind == KIND_PARAMS:
        body_ctx = _r_curve(r, ctx)
        l = r.u32()
        if l < 16:
            raise MalformedBody(f"message length {l} below minimum")
        g, d, u, v, w = (_r_source(r, body_ctx) for _ in range(5))
        Z = _r_target(r, body_ctx)
        r.done()
        for name, el in (("g", g), ("d", d), ("u", u), ("v", v), ("w", w)):
            if el.is_identity():
                raise MalformedBody(f"generator {name} is the identity")
        if Z != body_ctx.pair(g, g):
            raise MalformedBody("Z does not equal pair(g, g)")
        return Decoded("params", Params(body_ctx, g, d, u, v, w, Z, l))

    if kind == KIND_PUBLIC_KEY:
        body_ctx = _r_curve(r, ctx)
        n = r.u32()
        if not 1 <= n <= MAX_TYPE_COUNT:
            raise MalformedBody(f"type count {n} out of range")
        pk1 = _r_source(r, body_ctx)
        pk2 = _r_source(r, body_ctx)
        count = r.u32()
        if count != 2 * n - 1:
            raise MalformedBody(f"delta holds {count} elements, expected {2 * n - 1}")
        delta = tuple(_r_source(r, body_ctx) for _ in range(count))
        r.done()
        return Decoded("public-key", PublicKey(pk1, pk2, delta, n))

    if kind == KIND_SECRET_KEY:
        body_ctx = _r_curve(r, ctx)
        n = r.u32()
        if not 1 <= n <= MAX_TYPE_COUNT:
            raise MalformedBody(f"type count {n} out of range")
        a1 = _r_scalar(r, body_ctx, nonzero=True)
        a2 = _r_scalar(r, body_ctx, nonzero=True)
        a3 = _r_scalar(r, body_ctx, nonzero=True)
        r.done()
        return Decoded("secret-key", SecretKey(a1, a2, a3, n))

    if kind == KIND_REKEY:
        body_ctx = _r_curve(r, ctx)
        token = r.field()
        if len(token) != 2 * body_ctx.element_bytes:
            raise MalformedBody("re-key token is not two elements")
        try:
            r1 = SourceElement.deserialize(body_ctx, token[: body_ctx.element_bytes])
            r2 = SourceElement.deserialize(body_ctx, token[body_ctx.element_bytes :])
        except InvalidElementError as e:
            raise InvalidElement(str(e)) from None
        count = r.u32()
        if count > MAX_TYPE_COUNT:
            raise MalformedBody(f"type set size {count} out of range")
        S = []
        for _ in range(count):
            v = r.u32()
            if not 1 <= v <= MAX_TYPE_COUNT:
                raise MalformedBody(f"type index {v} out of range")
            S.append(v)
        r.done()
        if len(set(S)) != len(S) or S != sorted(S):
            raise MalformedBody("type set not canonical (sorted, unique)")
        return Decoded("rekey", ReKey(r1, r2, frozenset(S)))

    if kind == KIND_CT2:
        body_ctx = _r_curve(r, ctx)
        params_fp = _r_hint(r)
        key_hint = _r_hint(r)
        rho = r.u32()
        if not 1 <= rho <= MAX_TYPE_COUNT:
            raise MalformedBody(f"type index {rho} out of range")
        k = _r_scalar(r, body_ctx)
        c1, c2, c3, c4 = (_r_source(r, body_ctx) for _ in range(4))
        c5 = r.field()
        c6, c7, c8 = (_r_source(r, body_ctx) for _ in range(3))
        c9 = r.field()
        r.done()
        if len(c5) < 16 or len(c5) != len(c9):
            raise MalformedBody("mask fields malformed")
        obj = Level2Ciphertext(rho, k, c1, c2, c3, c4, c5, c6, c7, c8, c9)
        return Decoded("ct2", obj, params_fp, key_hint)

    # KIND_CT1
    body_ctx = _r_curve(r, ctx)
    params_fp = _r_hint(r)
    key_hint = _r_hint(r)
    k = _r_scalar(r, body_ctx)
    c1p = _r_source(r, body_ctx)
    c2p = _r_target(r, body_ctx)
    c3p = r.field()
    c4p = _r_source(r, body_ctx)
    c5p = _r_source(r, body_ctx)
    c6p = r.field()
    r.done()
    if len(c3p) < 16 or len(c3p) != len(c6p):
        raise MalformedBody("mask fields malformed")
    obj = Level1Ciphertext(k, c1p, c2p, c3p, c4p, c5p, c6p)
    return Decoded("ct1", obj, params_fp, key_hint)


def _r_hint(r: _Reader) -> bytes:
    f = r.field()
    if len(f) != FINGERPRINT_LEN:
        raise MalformedBody("bad fingerprint width")
    return f


# ---------------------------------------------------------------------------
# armor


def armor(data: bytes) -> str:
    """ASCII-armor a binary envelope."""
    if len(data) < 7 or data[:5] != MAGIC or data[6] not in KIND_NAMES:
        raise ValueError("not an envelope")
    label = KIND_NAMES[data[6]].upper()
    b64 = base64.b64encode(data).decode()
    lines = [b64[i : i + 64] for i in range(0, len(b64), 64)]
    return "\n".join(
        [f"-----BEGIN KAPRE {label}-----", *lines, f"-----END KAPRE {label}-----", ""]
    )


def unarmor(text: str) -> bytes:
    """Recover the binary envelope from its armored form."""
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if len(lines) < 2 or not lines[0].startswith("-----BEGIN KAPRE ") or not lines[0].endswith("-----"):
        raise DecodeError("missing armor header")
    label = lines[0][len("-----BEGIN KAPRE ") : -5]
    if lines[-1] != f"-----END KAPRE {label}-----":
        raise DecodeError("missing or mismatched armor footer")
    try:
        data = base64.b64decode("".join(lines[1:-1]), validate=True)
    except (binascii.Error, ValueError) as e:
        raise DecodeError(f"bad armor payload: {e}") from None
    if len(data) >= 7 and data[6] in KIND_NAMES and KIND_NAMES[data[6]].upper() != label:
        raise DecodeError("armor label does not match envelope kind")
    return data


def looks_armored(data: bytes) -> bool:
    return data.lstrip()[:17] == b"-----BEGIN KAPRE "


def load_envelope(data: bytes, ctx: PairingContext | None = None) -> Decoded:
    """Decode binary or armored bytes, whichever this is."""
    if looks_armored(data):
        try:
            text = data.decode()
        except UnicodeDecodeError:
            raise DecodeError("armored data is not text") from None
        data = unarmor(text)
    return decode(data, ctx)
