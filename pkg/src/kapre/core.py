"""Key-aggregate proxy re-encryption over a symmetric pairing.

One constant-size re-encryption key (two group elements, independent of how
many file types it covers) lets a proxy turn a delegator's second-level
ciphertexts of any authorized type into first-level ciphertexts for a
delegatee.  Eight operations: setup, keygen, rekeygen, enc2, enc1, reenc,
dec2, dec1, plus the validity checks used by the proxy and decryptors.

Per-user key material for n file types:

    sk = (a1, a2, a3)
    pk = (g^a1, g^a2, Delta),  Delta = <g_1..g_n, g_{n+2}..g_{2n}>,
    g_rho = g^(a3^rho)

The deliberate gap at g_{n+1} is what makes aggregation safe to publish:
re-encryption reconstitutes e(g_{n+1}, g^t) via a telescoping quotient but
g_{n+1} itself never appears.

All operations are pure given their inputs and the injected randomness
source; every returned structure is immutable and safely shareable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pairing import (
    DEFAULT_CURVE,
    PairingContext,
    RandomSource,
    SourceElement,
    SystemRandom,
    TargetElement,
    get_context,
)

MIN_MESSAGE_LEN = 16


class SchemeError(Exception):
    """Base class for scheme-level failures."""


class RejectedCiphertext(SchemeError):
    """Base class for the rejection symbol: the operation refuses its input.

    Callers that must not leak the cause (proxy/CLI boundaries) catch this
    base class; tests distinguish the subclasses.
    """


class PolicyError(RejectedCiphertext):
    """Re-encryption refused: the ciphertext's type is not in the grant."""


class InvalidCiphertextError(RejectedCiphertext):
    """A validity equation failed; the ciphertext is malformed or forged."""


class TagMismatchError(RejectedCiphertext):
    """The key-confirmation tag does not match the recovered session key."""


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Params:
    """Public parameters: five independent generators, Z = e(g,g), and the
    message byte-length l."""

    ctx: PairingContext
    g: SourceElement
    d: SourceElement
    u: SourceElement
    v: SourceElement
    w: SourceElement
    Z: TargetElement
    l: int


@dataclass(frozen=True)
class SecretKey:
    a1: int
    a2: int
    a3: int
    n: int


@dataclass(frozen=True)
class PublicKey:
    pk1: SourceElement
    pk2: SourceElement
    delta: tuple[SourceElement, ...]  # g_rho for rho in {1..2n} \ {n+1}
    n: int

    def gpow(self, rho: int) -> SourceElement:
        """g_rho = g^(a3^rho).  Valid for rho in [1, 2n] except n+1."""
        n = self.n
        if rho == n + 1:
            raise ValueError(f"g_{rho} is deliberately absent (n={n})")
        if not 1 <= rho <= 2 * n:
            raise ValueError(f"type power {rho} out of range for n={n}")
        return self.delta[rho - 1 if rho <= n else rho - 2]


@dataclass(frozen=True)
class ReKey:
    """Constant-size delegation token (r1, r2) plus the policy set S it
    covers.  Only (r1, r2) is cryptographic material; S is carried so the
    proxy can enforce the type gate."""

    r1: SourceElement
    r2: SourceElement
    S: frozenset[int]


@dataclass(frozen=True)
class Level2Ciphertext:
    """Re-encryptable ciphertext under the delegator's key, tagged with its
    plaintext type index rho (the proxy needs rho to apply the gate; it is
    not secret, Eq. 3 depends on it)."""

    rho: int
    k: int
    c1: SourceElement
    c2: SourceElement
    c3: SourceElement
    c4: SourceElement
    c5: bytes
    c6: SourceElement
    c7: SourceElement
    c8: SourceElement
    c9: bytes


@dataclass(frozen=True)
class Level1Ciphertext:
    """Terminal ciphertext: decryptable by its recipient, not
    re-encryptable again (single-use chain)."""

    k: int
    c1p: SourceElement
    c2p: TargetElement
    c3p: bytes
    c4p: SourceElement
    c5p: SourceElement
    c6p: bytes


# ---------------------------------------------------------------------------
# helpers


def _xor(*parts: bytes) -> bytes:
    out = bytearray(parts[0])
    for p in parts[1:]:
        if len(p) != len(out):
            raise InvalidCiphertextError("component length mismatch")
        for i, b in enumerate(p):
            out[i] ^= b
    return bytes(out)


def _H(ctx: PairingContext, first: SourceElement, second: bytes) -> int:
    return ctx.hash_to_scalar("H", first.serialize(), second)


def _H1(par: Params, key: TargetElement, binder: SourceElement) -> bytes:
    return par.ctx.mask_bytes(key, binder, par.l)


def _tag_base(par: Params, h: int, k: int) -> SourceElement:
    """u^h * v^k * w, the base of the c6/c7/c4' integrity components."""
    return (par.u ** h) * (par.v ** k) * par.w


def _check_message(par: Params, m: bytes) -> None:
    if len(m) != par.l:
        raise ValueError(f"message must be exactly {par.l} bytes, got {len(m)}")


def _inv_mod(a: int, order: int) -> int:
    return pow(a, -1, order)


# ---------------------------------------------------------------------------
# the eight algorithms


def setup(curve: str = DEFAULT_CURVE, l: int = 32, rng: RandomSource | None = None) -> Params:
    """Sample public parameters: independent uniform generators g, d, u, v,
    w and the pairing base Z = e(g,g).  l is the message byte-length."""
    if l < MIN_MESSAGE_LEN:
        raise ValueError(f"message length {l} below minimum {MIN_MESSAGE_LEN}")
    ctx = get_context(curve)
    rng = rng or SystemRandom()
    g, d, u, v, w = (ctx.random_generator(rng) for _ in range(5))
    return Params(ctx, g, d, u, v, w, ctx.pair(g, g), l)


def keygen(par: Params, n: int, rng: RandomSource | None = None) -> tuple[PublicKey, SecretKey]:
    """Per-user keys for n file types.  Delta holds g^(a3^rho) for
    rho in {1..2n} \\ {n+1}; the powers are built by iterated multiplication
    mod the group order."""
    if n < 1:
        raise ValueError("type count n must be >= 1")
    ctx = par.ctx
    rng = rng or SystemRandom()
    order = ctx.order
    a1 = rng.scalar_nonzero(order)
    a2 = rng.scalar_nonzero(order)
    a3 = rng.scalar_nonzero(order)
    delta = []
    acc = 1
    for rho in range(1, 2 * n + 1):
        acc = acc * a3 % order
        if rho != n + 1:
            delta.append(par.g ** acc)
    pk = PublicKey(par.g ** a1, par.g ** a2, tuple(delta), n)
    return pk, SecretKey(a1, a2, a3, n)


def aggregate(pk: PublicKey, S: frozenset[int] | set[int]) -> SourceElement:
    """prod_{v in S} g_{n+1-v}.  Empty S gives the identity."""
    n = pk.n
    for v in S:
        if not 1 <= v <= n:
            raise ValueError(f"type index {v} out of range [1, {n}]")
    return pk.pk1.ctx.product(pk.gpow(n + 1 - v) for v in sorted(S))


def rekeygen(
    par: Params,
    S: frozenset[int] | set[int],
    sk_i: SecretKey,
    pk_i: PublicKey,
    pk_j: PublicKey,
) -> ReKey:
    """Delegation token i -> j covering type set S:

        rk = ( pk_j1 ^ (1/a_{i,1}),  (prod_{v in S} g_{n+1-v}) ^ a_{i,2} )

    Two elements regardless of |S| or n.  Empty S is allowed and yields a
    grant that re-encrypts nothing.
    """
    r1 = pk_j.pk1 ** _inv_mod(sk_i.a1, par.ctx.order)
    r2 = aggregate(pk_i, S) ** sk_i.a2
    return ReKey(r1, r2, frozenset(S))


def enc2(
    par: Params,
    pk: PublicKey,
    m: bytes,
    rho: int,
    rng: RandomSource | None = None,
) -> Level2Ciphertext:
    """Second-level (re-encryptable) encryption of m under type rho."""
    _check_message(par, m)
    if not 1 <= rho <= pk.n:
        raise ValueError(f"type index {rho} out of range [1, {pk.n}]")
    ctx = par.ctx
    rng = rng or SystemRandom()
    order = ctx.order
    t = rng.scalar(order)
    k = rng.scalar(order)
    eta = rng.scalar(order)
    r = rng.scalar_nonzero(order)  # r = 0 would make c1 the identity

    K = par.Z ** r
    c1 = par.d ** r
    c2 = pk.pk1 ** r
    c3 = par.g ** t
    c4 = (pk.pk2 * pk.gpow(rho)) ** t
    kmask = _H1(par, K, c1)
    noise = _H1(par, ctx.pair(pk.gpow(1), pk.gpow(pk.n)) ** t, c1)
    c5 = _xor(kmask, m, noise)
    h = _H(ctx, c1, c5)
    c6 = _tag_base(par, h, k) ** r
    hp = _H(ctx, c1, _xor(kmask, m))
    c7 = _tag_base(par, hp, k) ** r
    c8 = par.g ** eta
    c9 = _H1(par, K, c8)
    return Level2Ciphertext(rho, k, c1, c2, c3, c4, c5, c6, c7, c8, c9)


def enc1(
    par: Params,
    pk: PublicKey,
    m: bytes,
    rng: RandomSource | None = None,
) -> Level1Ciphertext:
    """First-level (terminal) encryption of m."""
    _check_message(par, m)
    ctx = par.ctx
    rng = rng or SystemRandom()
    order = ctx.order
    k = rng.scalar(order)
    eta = rng.scalar(order)
    r = rng.scalar_nonzero(order)

    K = par.Z ** r
    c1p = par.d ** r
    c2p = ctx.pair(pk.pk1, par.g) ** r
    c3p = _xor(_H1(par, K, c1p), m)
    h = _H(ctx, c1p, c3p)
    c4p = _tag_base(par, h, k) ** r
    c5p = par.g ** eta
    c6p = _H1(par, K, c5p)
    return Level1Ciphertext(k, c1p, c2p, c3p, c4p, c5p, c6p)


def verify2(
    par: Params,
    pk: PublicKey,
    C: Level2Ciphertext,
    rng: RandomSource | None = None,
) -> bool:
    """Public validity check for second-level ciphertexts.

    Checks the type equation

        e(c3, pk2 * g_rho) = e(c4, g)                              (Eq. 3)

    plus the batched form of the two structure equations, with fresh
    nonzero d1, d2 each call:

        e(c1, pk1^d1 * (u^h v^k w)^d2) = e(c2^d1 * c6^d2, d)       (Eq. 5)

    A ciphertext failing exactly one of the underlying equations passes the
    batch with probability 1/order.
    """
    ctx = par.ctx
    if not 1 <= C.rho <= pk.n or len(C.c5) != par.l:
        return False
    if ctx.pair(C.c3, pk.pk2 * pk.gpow(C.rho)) != ctx.pair(C.c4, par.g):
        return False
    rng = rng or SystemRandom()
    d1 = rng.scalar_nonzero(ctx.order)
    d2 = rng.scalar_nonzero(ctx.order)
    h = _H(ctx, C.c1, C.c5)
    lhs = ctx.pair(C.c1, (pk.pk1 ** d1) * (_tag_base(par, h, C.k) ** d2))
    rhs = ctx.pair((C.c2 ** d1) * (C.c6 ** d2), par.d)
    return lhs == rhs


def verify2_diagnostics(par: Params, pk: PublicKey, C: Level2Ciphertext) -> dict[str, bool]:
    """Unbatched per-equation results, for operators debugging a rejected
    ciphertext.  Slower than verify2 and leaks which equation failed, so
    never used on the proxy path."""
    ctx = par.ctx
    out = {"eq1": False, "eq2": False, "eq3": False}
    if len(C.c5) == par.l:
        h = _H(ctx, C.c1, C.c5)
        out["eq1"] = ctx.pair(C.c1, _tag_base(par, h, C.k)) == ctx.pair(C.c6, par.d)
    out["eq2"] = ctx.pair(C.c1, pk.pk1) == ctx.pair(C.c2, par.d)
    if 1 <= C.rho <= pk.n:
        out["eq3"] = ctx.pair(C.c3, pk.pk2 * pk.gpow(C.rho)) == ctx.pair(C.c4, par.g)
    return out


def _reenc_transform(par: Params, pk_i: PublicKey, rk: ReKey, C: Level2Ciphertext) -> Level1Ciphertext:
    """The raw re-encryption transform, no policy or validity checks.

    Split out so adversarial tests can observe what a cheating proxy gets by
    skipping the gate (a garbled plaintext, not a usable one); library users
    call reenc.
    """
    ctx = par.ctx
    n = pk_i.n
    rho = C.rho
    c2p = ctx.pair(C.c2, rk.r1)
    num = ctx.pair(aggregate(pk_i, rk.S), C.c4)
    corr = ctx.product(pk_i.gpow(n + 1 - v + rho) for v in sorted(rk.S) if v != rho)
    den = ctx.pair(rk.r2 * corr, C.c3)
    c3p = _xor(C.c5, _H1(par, num / den, C.c1))
    return Level1Ciphertext(C.k, C.c1, c2p, c3p, C.c7, C.c8, C.c9)


def reenc(
    par: Params,
    pk_i: PublicKey,
    rk: ReKey,
    C: Level2Ciphertext,
    rng: RandomSource | None = None,
) -> Level1Ciphertext:
    """Proxy transform: second-level ciphertext of user i -> first-level
    ciphertext for the delegatee of rk.

    Rejects (PolicyError) when C's type is outside the grant, and
    (InvalidCiphertextError) when validity fails.  The output decrypts under
    the delegatee's key to the original message:

        c1' = c1,  c2' = e(c2, r1),  c4' = c7,  c5' = c8,  c6' = c9,
        c3' = c5 XOR H1( e(prod_{v in S} g_{n+1-v}, c4)
                         / e(r2 * prod_{v in S, v != rho} g_{n+1-v+rho}, c3),
                         c1 )
    """
    if C.rho not in rk.S:
        raise PolicyError(f"ciphertext type {C.rho} not covered by the grant")
    if not verify2(par, pk_i, C, rng):
        raise InvalidCiphertextError("second-level validity check failed")
    return _reenc_transform(par, pk_i, rk, C)


def dec2(
    par: Params,
    sk: SecretKey,
    pk: PublicKey,
    C: Level2Ciphertext,
    rng: RandomSource | None = None,
) -> bytes:
    """Decrypt a second-level ciphertext with the owner's key.

    K = e(c2, g)^(1/a1); the tag H1(K, c8) must equal c9.  The plaintext
    mask needs g_{n+1}, which Delta omits, so it is recomputed from a3:

        m = H1(K, c1) XOR c5 XOR H1(e(c3, g^(a3^(n+1))), c1)
    """
    ctx = par.ctx
    if not verify2(par, pk, C, rng):
        raise InvalidCiphertextError("second-level validity check failed")
    if len(C.c9) != par.l:
        raise TagMismatchError("key-confirmation tag mismatch")
    K = ctx.pair(C.c2, par.g) ** _inv_mod(sk.a1, ctx.order)
    if _H1(par, K, C.c8) != C.c9:
        raise TagMismatchError("key-confirmation tag mismatch")
    g_n1 = par.g ** pow(sk.a3, sk.n + 1, ctx.order)
    return _xor(_H1(par, K, C.c1), C.c5, _H1(par, ctx.pair(C.c3, g_n1), C.c1))


def dec1(par: Params, sk: SecretKey, C: Level1Ciphertext) -> bytes:
    """Decrypt a first-level ciphertext (fresh enc1 output or reenc output).

    Validity: e(c1', u^h v^k w) = e(c4', d) with h = H(c1', c3')   (Eq. 4)
    Tag:      H1(K, c5') = c6' with K = (c2')^(1/a1)               (Eq. 6)
    """
    ctx = par.ctx
    if len(C.c3p) != par.l:
        raise InvalidCiphertextError("component length mismatch")
    h = _H(ctx, C.c1p, C.c3p)
    if ctx.pair(C.c1p, _tag_base(par, h, C.k)) != ctx.pair(C.c4p, par.d):
        raise InvalidCiphertextError("first-level validity check failed")
    if len(C.c6p) != par.l:
        raise TagMismatchError("key-confirmation tag mismatch")
    K = C.c2p ** _inv_mod(sk.a1, ctx.order)
    if _H1(par, K, C.c5p) != C.c6p:
        raise TagMismatchError("key-confirmation tag mismatch")
    return _xor(_H1(par, K, C.c1p), C.c3p)
