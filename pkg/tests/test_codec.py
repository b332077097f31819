"""Envelope format tests: round-trips, strict rejection of malformed input,
armor, fingerprints, and a decode fuzz smoke (the full budget runs in the
acceptance suite)."""

import random

import pytest

from kapre import codec, core
from kapre.pairing import DeterministicRandom

KINDS = ["params", "public-key", "secret-key", "rekey", "ct2", "ct1"]


@pytest.fixture(scope="module")
def objs(par):
    rng = DeterministicRandom(0xC0DEC)
    pk_i, sk_i = core.keygen(par, 4, rng)
    pk_j, sk_j = core.keygen(par, 4, rng)
    rk = core.rekeygen(par, {1, 4}, sk_i, pk_i, pk_j)
    m = rng.fill(par.l)
    ct2 = core.enc2(par, pk_i, m, 1, rng)
    ct1 = core.reenc(par, pk_i, rk, ct2, rng)
    return {
        "params": par,
        "public-key": pk_i,
        "secret-key": sk_i,
        "rekey": rk,
        "ct2": ct2,
        "ct1": ct1,
    }


@pytest.mark.parametrize("kind", KINDS)
def test_roundtrip(par, objs, kind):
    ctx = par.ctx if kind == "secret-key" else None
    blob = codec.encode(objs[kind], ctx=ctx)
    dec = codec.decode(blob)
    assert dec.kind == kind
    assert codec.encode(dec.obj, ctx=ctx) == blob  # canonical re-encode


def test_roundtrip_preserves_values(par, objs):
    sk = codec.decode(codec.encode(objs["secret-key"], ctx=par.ctx)).obj
    assert (sk.a1, sk.a2, sk.a3, sk.n) == (
        objs["secret-key"].a1, objs["secret-key"].a2,
        objs["secret-key"].a3, objs["secret-key"].n)
    rk = codec.decode(codec.encode(objs["rekey"])).obj
    assert rk.S == objs["rekey"].S and rk.r1 == objs["rekey"].r1
    ct = codec.decode(codec.encode(objs["ct2"])).obj
    assert ct == objs["ct2"]


def test_decoded_ciphertexts_decrypt(par, objs, rng):
    pk_i, sk_i = objs["public-key"], objs["secret-key"]
    ct2 = codec.decode(codec.encode(objs["ct2"])).obj
    m = core.dec2(par, sk_i, pk_i, ct2, rng)
    assert m == core.dec2(par, sk_i, pk_i, objs["ct2"], rng)


def test_fingerprints_travel(par, objs):
    fp = codec.params_fingerprint(par)
    hint = codec.key_fingerprint(objs["public-key"])
    assert len(fp) == codec.FINGERPRINT_LEN == len(hint)
    blob = codec.encode(objs["ct2"], params_fp=fp, key_hint=hint)
    dec = codec.decode(blob)
    assert dec.params_fp == fp and dec.key_hint == hint
    # defaults are all-zero
    dec0 = codec.decode(codec.encode(objs["ct2"]))
    assert dec0.params_fp == codec.ZERO_HINT and dec0.key_hint == codec.ZERO_HINT


def test_rekey_token_size_is_set_independent(par, objs, rng):
    pk_i, sk_i = objs["public-key"], objs["secret-key"]
    pk_j = objs["public-key"]
    sizes = set()
    for S in ({1}, {1, 2}, {1, 2, 3, 4}, frozenset()):
        rk = core.rekeygen(par, S, sk_i, pk_i, pk_j)
        sizes.add(len(codec.encode_rekey_token(rk)))
    assert sizes == {2 * par.ctx.element_bytes}


def test_kind_name_table():
    assert codec.KIND_NAMES == {
        0x01: "params", 0x02: "public-key", 0x03: "secret-key",
        0x04: "rekey", 0x05: "ct2", 0x06: "ct1",
    }


# ---------------------------------------------------------------- rejection

def test_reject_bad_magic(objs):
    blob = codec.encode(objs["public-key"])
    with pytest.raises(codec.BadMagic):
        codec.decode(b"NOPE!" + blob[5:])


def test_reject_bad_version(objs):
    blob = bytearray(codec.encode(objs["public-key"]))
    blob[5] = 0x7F
    with pytest.raises(codec.BadVersion):
        codec.decode(bytes(blob))


def test_reject_bad_kind(objs):
    blob = bytearray(codec.encode(objs["public-key"]))
    blob[6] = 0x3A
    with pytest.raises(codec.BadKind):
        codec.decode(bytes(blob))


def test_reject_truncation_everywhere(objs):
    blob = codec.encode(objs["rekey"])
    for cut in (0, 3, 6, 7, len(blob) // 2, len(blob) - 1):
        with pytest.raises(codec.DecodeError):
            codec.decode(blob[:cut])


def test_reject_trailing_garbage(objs):
    blob = codec.encode(objs["ct1"])
    with pytest.raises(codec.TrailingGarbage):
        codec.decode(blob + b"\x00")


def test_reject_corrupt_element(par, objs):
    blob = bytearray(codec.encode(objs["public-key"]))
    # flip a byte deep in the first element encoding; either the point fails
    # validation or (negligibly often) lands on another valid point
    idx = blob.index(0x02, 8)
    blob[idx + 10] ^= 0xFF
    with pytest.raises(codec.DecodeError):
        codec.decode(bytes(blob))


def test_reject_oversized_field(objs):
    head = codec.MAGIC + bytes([codec.VERSION, codec.KIND_PARAMS])
    body = (codec.MAX_FIELD_LEN + 1).to_bytes(4, "big") + b"x"
    with pytest.raises(codec.DecodeError):
        codec.decode(head + body)


def test_reject_unknown_curve(par, objs):
    blob = codec.encode(objs["secret-key"], ctx=par.ctx)
    swapped = blob.replace(b"ss512", b"ss999", 1)
    with pytest.raises(codec.UnknownCurve):
        codec.decode(swapped)


def test_reject_curve_context_mismatch(par, objs):
    from kapre.pairing import get_context
    blob = codec.encode(objs["rekey"])
    with pytest.raises(codec.DecodeError):
        codec.decode(blob, ctx=get_context("ss1024"))


def test_reject_rekey_malformed_set(par, objs):
    # out-of-order indices are non-canonical
    rk = objs["rekey"]
    S = sorted(rk.S)
    blob = codec.encode(rk)
    a, b = (v.to_bytes(4, "big") for v in (S[0], S[1]))
    swapped = blob.replace(a + b, b + a, 1)
    assert swapped != blob
    with pytest.raises(codec.MalformedBody):
        codec.decode(swapped)


def test_reject_zero_secret_scalar(par, objs):
    sk = objs["secret-key"]
    blob = codec.encode(core.SecretKey(sk.a1, sk.a2, sk.a3, sk.n), ctx=par.ctx)
    zeros = codec.encode(core.SecretKey(sk.a1, 0, sk.a3, sk.n), ctx=par.ctx)
    assert codec.decode(blob)
    with pytest.raises(codec.DecodeError):
        codec.decode(zeros)


# ---------------------------------------------------------------- armor

@pytest.mark.parametrize("kind", KINDS)
def test_armor_roundtrip(par, objs, kind):
    ctx = par.ctx if kind == "secret-key" else None
    blob = codec.encode(objs[kind], ctx=ctx)
    text = codec.armor(blob)
    label = kind.upper()
    assert text.splitlines()[0] == f"-----BEGIN KAPRE {label}-----"
    assert text.splitlines()[-1] == f"-----END KAPRE {label}-----"
    assert max(len(line) for line in text.splitlines()) <= 64
    assert codec.unarmor(text) == blob
    assert codec.looks_armored(text.encode())
    assert not codec.looks_armored(blob)
    assert codec.load_envelope(text.encode()).kind == kind
    assert codec.load_envelope(blob).kind == kind


def test_unarmor_rejects_label_mismatch(objs):
    text = codec.armor(codec.encode(objs["public-key"]))
    lied = text.replace("PUBLIC-KEY", "REKEY")
    with pytest.raises(codec.DecodeError):
        codec.unarmor(lied)


def test_unarmor_rejects_damage(objs):
    text = codec.armor(codec.encode(objs["rekey"]))
    with pytest.raises(codec.DecodeError):
        codec.unarmor(text.replace("-----END", "--END"))
    with pytest.raises(codec.DecodeError):
        codec.unarmor("no armor here")
    lines = text.splitlines()
    lines[1] = "!!!!" + lines[1][4:]
    with pytest.raises(codec.DecodeError):
        codec.unarmor("\n".join(lines))


# ---------------------------------------------------------------- fuzz smoke

def test_decode_fuzz_smoke(objs, par):
    # random bytes and mutated valid envelopes must always raise DecodeError,
    # never anything else (full 10k-case budget lives in the acceptance run)
    r = random.Random(1234)
    valid = [codec.encode(objs[k], ctx=par.ctx if k == "secret-key" else None)
             for k in KINDS]
    for i in range(500):
        if i % 2:
            data = bytes(r.randrange(256) for _ in range(r.randrange(0, 200)))
        else:
            data = bytearray(r.choice(valid))
            for _ in range(r.randrange(1, 6)):
                data[r.randrange(len(data))] = r.randrange(256)
            data = bytes(data)
        try:
            codec.decode(data)
        except codec.DecodeError:
            pass
