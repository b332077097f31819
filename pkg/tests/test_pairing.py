"""Backend tests: curve constants, group law, pairing, encodings, hashing,
deterministic randomness."""

import random

import gmpy2
import pytest

from kapre.pairing import (
    CURVES,
    DeterministicRandom,
    InvalidElementError,
    SourceElement,
    SystemRandom,
    TargetElement,
    get_context,
)
from kapre.pairing.backend import GT_ONE, get_group
from kapre.pairing.hashing import hash_to_scalar, mask_bytes


# ---------------------------------------------------------------- constants

def _recipe_base_point(g):
    # same search the constants were generated with: smallest x >= 2 whose
    # even-y root survives cofactor clearing
    x = 2
    while True:
        y = g.sqrt((x**3 + x) % g.p)
        if y is not None:
            if int(y) & 1:
                y = g.p - y
            G = g.mul(int(g.cofactor), (x, y))
            if G is not None:
                return G
        x += 1


@pytest.mark.parametrize("name", sorted(CURVES))
def test_curve_constants_reproduce(name):
    spec = CURVES[name]
    p, q = spec.modulus, spec.order
    assert gmpy2.is_prime(p, 40)
    assert gmpy2.is_prime(q, 40)
    assert p % 4 == 3                     # sqrt via (p+1)/4, i^2 = -1 irreducible
    assert (p + 1) % q == 0               # supersingular: #E = p + 1
    assert spec.cofactor == (p + 1) // q
    assert p.bit_length() == int(name[2:])
    assert q == (1 << 254) + 79

    g = get_group(spec)
    assert g.on_curve(spec.gen)
    assert g.in_subgroup(spec.gen)
    assert g.mul(q, spec.gen) is None     # exact order q
    assert _recipe_base_point(g) == (spec.gen[0], spec.gen[1])


def test_pairing_nondegenerate_each_curve():
    for name in CURVES:
        ctx = get_context(name)
        assert ctx.pair(ctx.base, ctx.base) != ctx.identity_target()


def test_unknown_curve_rejected():
    with pytest.raises(ValueError):
        get_context("ss9000")


# ---------------------------------------------------------------- group law

def test_backend_mul_uses_raw_scalar(ctx):
    # subgroup/order checks depend on mul NOT reducing k mod q
    g = ctx._g
    assert g.mul(int(g.order), g.gen) is None
    assert g.mul(1, g.gen) == g.gen
    assert g.mul(0, g.gen) is None
    assert g.mul(2, g.gen) == g.add(g.gen, g.gen)
    assert g.mul(-1, g.gen) == g.neg(g.gen)
    assert g.mul(int(g.order) + 1, g.gen) == g.gen


def test_add_identity_and_inverse(ctx):
    P = (ctx.base ** 7)._pt
    g = ctx._g
    assert g.add(P, None) == P
    assert g.add(None, P) == P
    assert g.add(P, g.neg(P)) is None


def test_exponent_reduces_mod_order(ctx, rng):
    s = rng.scalar(ctx.order)
    assert ctx.base ** s == ctx.base ** (s + ctx.order)
    assert (ctx.base ** s) * (ctx.base ** (ctx.order - s)) == ctx.identity_source()


def test_product_matches_repeated_multiply(ctx, rng):
    for trial in range(20):
        r = random.Random(trial)
        elems = [ctx.base ** rng.scalar(ctx.order) for _ in range(r.randrange(0, 7))]
        if elems and trial % 3 == 0:
            elems.append(elems[0].inverse())  # force a cancellation step
        if elems and trial % 4 == 0:
            elems.append(elems[-1])           # force a doubling step
        ref = ctx.identity_source()
        for e in elems:
            ref = ref * e
        assert ctx.product(elems) == ref
    assert ctx.product([]) == ctx.identity_source()


# ---------------------------------------------------------------- pairing

def test_bilinearity(ctx, rng):
    Z = ctx.pair(ctx.base, ctx.base)
    for _ in range(5):
        a = rng.scalar_nonzero(ctx.order)
        b = rng.scalar_nonzero(ctx.order)
        assert ctx.pair(ctx.base ** a, ctx.base ** b) == Z ** (a * b % ctx.order)


def test_pairing_symmetry(ctx, rng):
    P = ctx.base ** rng.scalar_nonzero(ctx.order)
    Q = ctx.base ** rng.scalar_nonzero(ctx.order)
    assert ctx.pair(P, Q) == ctx.pair(Q, P)


def test_pairing_additive_in_first_argument(ctx, rng):
    P = ctx.base ** rng.scalar_nonzero(ctx.order)
    Q = ctx.base ** rng.scalar_nonzero(ctx.order)
    R = ctx.base ** rng.scalar_nonzero(ctx.order)
    assert ctx.pair(P * Q, R) == ctx.pair(P, R) * ctx.pair(Q, R)


def test_pairing_identity_argument(ctx):
    assert ctx.pair(ctx.identity_source(), ctx.base) == ctx.identity_target()
    assert ctx.pair(ctx.base, ctx.identity_source()) == ctx.identity_target()


def test_target_group_ops(ctx, rng):
    Z = ctx.pair(ctx.base, ctx.base)
    a = rng.scalar_nonzero(ctx.order)
    A = Z ** a
    assert A * A.inverse() == ctx.identity_target()
    assert A / A == ctx.identity_target()
    assert (A ** 2) == A * A
    assert Z ** ctx.order == ctx.identity_target()


# ---------------------------------------------------------------- encodings

def test_source_serialize_roundtrip(ctx, rng):
    for _ in range(10):
        e = ctx.base ** rng.scalar_nonzero(ctx.order)
        data = e.serialize()
        assert len(data) == ctx.element_bytes
        assert data[0] in (0x02, 0x03)
        assert SourceElement.deserialize(ctx, data) == e
    ident = ctx.identity_source().serialize()
    assert ident == b"\x00" * ctx.element_bytes
    assert SourceElement.deserialize(ctx, ident).is_identity()


def test_source_deserialize_rejects(ctx):
    good = (ctx.base ** 5).serialize()
    bad_inputs = [
        good[:-1],                                  # short
        good + b"\x00",                             # long
        bytes([0x04]) + good[1:],                   # bad flag
        bytes([0x02]) + b"\xff" * ctx.fe_bytes,     # x >= p
        bytes([0x01]) + good[1:],                   # reserved flag
        bytes([0x00]) + good[1:],                   # identity flag, nonzero x
    ]
    for data in bad_inputs:
        with pytest.raises(InvalidElementError):
            SourceElement.deserialize(ctx, data)
    # x on the curve whose y^2 = x^3 + x has no root
    g = ctx._g
    x = 3
    while g.sqrt((x**3 + x) % g.p) is not None:
        x += 1
    with pytest.raises(InvalidElementError):
        SourceElement.deserialize(ctx, bytes([0x02]) + x.to_bytes(ctx.fe_bytes, "big"))


def test_source_deserialize_rejects_wrong_subgroup(ctx):
    # a point of cofactor order: on the curve, wrong subgroup
    g = ctx._g
    x = 2
    while True:
        y = g.sqrt((x**3 + x) % g.p)
        if y is not None:
            Q = g.mul(int(g.order), (x, int(y)))  # kills the order-q part
            if Q is not None:
                break
        x += 1
    assert g.on_curve(Q) and not g.in_subgroup(Q)
    data = bytes([0x02 | (int(Q[1]) & 1)]) + int(Q[0]).to_bytes(ctx.fe_bytes, "big")
    with pytest.raises(InvalidElementError):
        SourceElement.deserialize(ctx, data)


def test_target_serialize_roundtrip(ctx, rng):
    Z = ctx.pair(ctx.base, ctx.base)
    for _ in range(5):
        e = Z ** rng.scalar_nonzero(ctx.order)
        data = e.serialize()
        assert len(data) == ctx.gt_bytes
        assert TargetElement.deserialize(ctx, data) == e
    ident = ctx.identity_target()
    assert TargetElement.deserialize(ctx, ident.serialize()) == ident


def test_target_deserialize_rejects(ctx):
    fe = ctx.fe_bytes
    two = (2).to_bytes(fe, "big") + (0).to_bytes(fe, "big")   # norm != 1
    with pytest.raises(InvalidElementError):
        TargetElement.deserialize(ctx, two)
    with pytest.raises(InvalidElementError):
        TargetElement.deserialize(ctx, b"\xff" * 2 * fe)      # coeff >= p
    with pytest.raises(InvalidElementError):
        TargetElement.deserialize(ctx, b"\x00" * fe)          # short


def test_gt_in_subgroup_excludes_norm1_wrong_order(ctx):
    # -1 has norm 1 but order 2, which does not divide the odd prime q
    g = ctx._g
    assert g.gt_in_subgroup(GT_ONE)
    assert not g.gt_in_subgroup((int(g.p) - 1, 0))


# ---------------------------------------------------------------- hashing

def test_hash_to_scalar_range_and_determinism(ctx):
    seen = set()
    for i in range(50):
        s = hash_to_scalar(ctx.order, "H", i.to_bytes(4, "big"))
        assert 1 <= s < ctx.order
        seen.add(s)
    assert len(seen) == 50
    assert hash_to_scalar(ctx.order, "H", b"x") == hash_to_scalar(ctx.order, "H", b"x")


def test_hash_to_scalar_domain_separation(ctx):
    assert hash_to_scalar(ctx.order, "H", b"x") != hash_to_scalar(ctx.order, "H1", b"x")


def test_hash_to_scalar_framing(ctx):
    # parts are length-framed: ("AB","") must differ from ("A","B")
    assert hash_to_scalar(ctx.order, "H", b"AB", b"") != hash_to_scalar(ctx.order, "H", b"A", b"B")


def test_mask_bytes_properties():
    mask = mask_bytes(b"key", b"binder", 32)
    assert len(mask) == 32 and mask == mask_bytes(b"key", b"binder", 32)
    assert mask != mask_bytes(b"key", b"binder2", 32)
    assert mask != mask_bytes(b"key2", b"binder", 32)
    assert mask_bytes(b"key", b"binder", 48)[:32] == mask  # XOF: prefix-consistent
    data = bytes(range(32))
    masked = bytes(a ^ b for a, b in zip(data, mask))
    assert bytes(a ^ b for a, b in zip(masked, mask)) == data


# ---------------------------------------------------------------- randomness

def test_deterministic_rng_reproducible():
    a, b = DeterministicRandom(7), DeterministicRandom(7)
    assert a.fill(64) == b.fill(64)
    assert a.fill(3) == b.fill(3)
    assert DeterministicRandom(7).fill(16) != DeterministicRandom(8).fill(16)


def test_deterministic_rng_pinned():
    # frozen stream values: any change to the DRBG construction must show up
    assert DeterministicRandom(1).fill(16).hex() == "930804c446e7c22f93bf47a16f15a49e"
    assert DeterministicRandom(b"pin").fill(16).hex() == "e2d4b104101cc26a7de8f88387e5924e"
    assert DeterministicRandom(1).scalar(CURVES["ss512"].order) == int(
        "130804c446e7c22f93bf47a16f15a49eff85ae752367ee2c65b371452fb1e8de", 16
    )


def test_deterministic_rng_rejects_negative_seed():
    with pytest.raises(ValueError):
        DeterministicRandom(-1)


def test_scalar_sampling_bounds(ctx):
    rng = DeterministicRandom(99)
    for _ in range(200):
        assert 0 <= rng.scalar(ctx.order) < ctx.order
    for _ in range(50):
        assert 1 <= rng.scalar_nonzero(ctx.order) < ctx.order


def test_system_random_basic(ctx):
    rng = SystemRandom()
    assert len(rng.fill(32)) == 32
    assert rng.fill(32) != rng.fill(32)
    assert 0 <= rng.scalar(ctx.order) < ctx.order
