"""Symmetric-pairing group abstraction.

PairingContext is the only surface the scheme layer sees: two prime-order
groups of the same order, a symmetric bilinear map between them, scalar
hashing, masking, and canonical encodings.  Elements carry their context
and overload ``*`` (group law), ``**`` (scalar exponent, reduced mod the
group order) and ``/`` (target group only), so scheme code reads like the
algebra it implements.
"""

from __future__ import annotations

from . import backend
from .backend import GT_ONE, Group, mpz
from .hashing import hash_to_scalar, mask_bytes
from .params import CURVES, DEFAULT_CURVE, CurveSpec
from .rng import RandomSource


class InvalidElementError(ValueError):
    """Encoding is not a valid element of the expected prime-order group."""


class SourceElement:
    """Element of the source group G."""

    __slots__ = ("ctx", "_pt")

    def __init__(self, ctx: "PairingContext", pt):
        self.ctx = ctx
        self._pt = pt  # (x, y) or None for the identity

    def __mul__(self, other: "SourceElement") -> "SourceElement":
        return SourceElement(self.ctx, self.ctx._g.add(self._pt, other._pt))

    def __pow__(self, e: int) -> "SourceElement":
        return SourceElement(self.ctx, self.ctx._g.mul(e % self.ctx.order, self._pt))

    def inverse(self) -> "SourceElement":
        return SourceElement(self.ctx, self.ctx._g.neg(self._pt))

    def is_identity(self) -> bool:
        return self._pt is None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SourceElement)
            and self.ctx.name == other.ctx.name
            and self._pt == other._pt
        )

    def __hash__(self):
        return hash((self.ctx.name, None if self._pt is None else (int(self._pt[0]), int(self._pt[1]))))

    def __repr__(self):
        return f"<SourceElement {self.serialize().hex()[:16]}… on {self.ctx.name}>"

    def serialize(self) -> bytes:
        """Compressed encoding: flag byte (0x02/0x03 = y parity, 0x00 =
        identity) followed by the fixed-width big-endian x-coordinate."""
        fe = self.ctx.fe_bytes
        if self._pt is None:
            return b"\x00" * (1 + fe)
        x, y = self._pt
        flag = 0x02 | (int(y) & 1)
        return bytes([flag]) + int(x).to_bytes(fe, "big")

    @classmethod
    def deserialize(cls, ctx: "PairingContext", data: bytes) -> "SourceElement":
        """Strict decode: rejects bad length/flag, non-canonical x, points
        off the curve, and points outside the prime-order subgroup."""
        fe = ctx.fe_bytes
        if len(data) != 1 + fe:
            raise InvalidElementError("bad source-element length")
        flag, xb = data[0], data[1:]
        if flag == 0x00:
            if any(xb):
                raise InvalidElementError("nonzero identity encoding")
            return cls(ctx, None)
        if flag not in (0x02, 0x03):
            raise InvalidElementError("bad compression flag")
        x = int.from_bytes(xb, "big")
        g = ctx._g
        if x >= g.p:
            raise InvalidElementError("x out of field range")
        x = mpz(x)
        y = g.sqrt((x * x * x + x) % g.p)
        if y is None:
            raise InvalidElementError("x not on curve")
        if (int(y) & 1) != (flag & 1):
            y = (-y) % g.p
        pt = (x, y)
        if not g.in_subgroup(pt):
            raise InvalidElementError("point not in prime-order subgroup")
        return cls(ctx, pt)


class TargetElement:
    """Element of the target group G_T."""

    __slots__ = ("ctx", "_v")

    def __init__(self, ctx: "PairingContext", v):
        self.ctx = ctx
        self._v = v  # (a, b) in F_p2, norm 1, order dividing q

    def __mul__(self, other: "TargetElement") -> "TargetElement":
        return TargetElement(self.ctx, self.ctx._g.gt_mul(self._v, other._v))

    def __truediv__(self, other: "TargetElement") -> "TargetElement":
        g = self.ctx._g
        return TargetElement(self.ctx, g.gt_mul(self._v, g.gt_inv(other._v)))

    def __pow__(self, e: int) -> "TargetElement":
        return TargetElement(self.ctx, self.ctx._g.gt_pow(self._v, e % self.ctx.order))

    def inverse(self) -> "TargetElement":
        return TargetElement(self.ctx, self.ctx._g.gt_inv(self._v))

    def is_identity(self) -> bool:
        return self._v == GT_ONE

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TargetElement)
            and self.ctx.name == other.ctx.name
            and self._v == other._v
        )

    def __hash__(self):
        return hash((self.ctx.name, int(self._v[0]), int(self._v[1])))

    def __repr__(self):
        return f"<TargetElement {self.serialize().hex()[:16]}… on {self.ctx.name}>"

    def serialize(self) -> bytes:
        """Fixed-width encoding: both F_p2 coefficients, big-endian."""
        fe = self.ctx.fe_bytes
        a, b = self._v
        return int(a).to_bytes(fe, "big") + int(b).to_bytes(fe, "big")

    @classmethod
    def deserialize(cls, ctx: "PairingContext", data: bytes) -> "TargetElement":
        fe = ctx.fe_bytes
        if len(data) != 2 * fe:
            raise InvalidElementError("bad target-element length")
        a = int.from_bytes(data[:fe], "big")
        b = int.from_bytes(data[fe:], "big")
        if not ctx._g.gt_in_subgroup((mpz(a), mpz(b))):
            raise InvalidElementError("value not in target subgroup")
        return cls(ctx, (mpz(a), mpz(b)))


class PairingContext:
    """One curve's groups, base generator and encoding geometry.

    order          prime order of G and G_T (the scheme's modulus for all
                   scalar arithmetic)
    fe_bytes       bytes per base-field element
    element_bytes  bytes per serialized source element (1 + fe_bytes)
    gt_bytes       bytes per serialized target element (2 * fe_bytes)
    scalar_bytes   bytes per serialized scalar
    """

    def __init__(self, spec: CurveSpec):
        self.spec = spec
        self.name = spec.name
        self._g: Group = backend.get_group(spec)
        self.order: int = spec.order
        self.fe_bytes = spec.fe_bytes
        self.element_bytes = 1 + spec.fe_bytes
        self.gt_bytes = 2 * spec.fe_bytes
        self.scalar_bytes = spec.scalar_bytes
        self.base = SourceElement(self, self._g.gen)

    # -- construction --

    def identity_source(self) -> SourceElement:
        return SourceElement(self, None)

    def identity_target(self) -> TargetElement:
        return TargetElement(self, GT_ONE)

    def random_generator(self, rng: RandomSource) -> SourceElement:
        """Uniform non-identity subgroup element (prime order makes every
        such element a generator)."""
        while True:
            s = rng.scalar(self.order)
            if s != 0:
                return self.base ** s

    def random_scalar(self, rng: RandomSource) -> int:
        return rng.scalar(self.order)

    # -- bulk group law --

    def product(self, elements) -> SourceElement:
        """Product of source elements; one field inversion total, so long
        aggregation products stay cheap."""
        return SourceElement(self, self._g.sum_points(e._pt for e in elements))

    # -- pairing --

    def pair(self, a: SourceElement, b: SourceElement) -> TargetElement:
        return TargetElement(self, self._g.pair(a._pt, b._pt))

    # -- hashing --

    def hash_to_scalar(self, domain_tag: str, *parts: bytes) -> int:
        """Hash byte-string parts to a scalar in [1, order-1]."""
        return hash_to_scalar(self.order, domain_tag, *parts)

    def mask_bytes(self, key_material: TargetElement, binder: SourceElement, out_len: int) -> bytes:
        """out_len-byte mask bound to the canonical encodings of both
        elements; XORing twice with the same arguments is the identity."""
        return mask_bytes(key_material.serialize(), binder.serialize(), out_len)

    def __eq__(self, other) -> bool:
        return isinstance(other, PairingContext) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"<PairingContext {self.name}>"


_CONTEXTS: dict[str, PairingContext] = {}


def get_context(curve: str = DEFAULT_CURVE) -> PairingContext:
    """Shared context for a named parameter set (contexts are immutable)."""
    try:
        spec = CURVES[curve]
    except KeyError:
        raise ValueError(f"unknown curve {curve!r}; choices: {', '.join(sorted(CURVES))}") from None
    ctx = _CONTEXTS.get(curve)
    if ctx is None:
        ctx = _CONTEXTS[curve] = PairingContext(spec)
    return ctx
