"""Command-line workflow for the three roles (delegator, proxy, delegatee).

Commands: setup, keygen, grant, encrypt, reencrypt, decrypt, inspect, bench.

Exit codes are a stable contract:
  0  success
  2  environment / usage (missing artifacts, existing artifacts without
     --force, --seed without --insecure-test-mode, bad invocation)
  3  validation (bad counts, out-of-range type indices, wrong raw length)
  4  cryptographic failure — always the single opaque message
     "invalid ciphertext or unauthorized", never the cause

Files the scheme cannot encrypt directly (anything that is not exactly l
bytes) go through the default hybrid mode: a random l-byte content key is
encrypted under the scheme and the file body under ChaCha20-Poly1305 keyed
from it.  --raw skips the wrapping and requires an exactly-l-byte input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import struct
import sys
from pathlib import Path

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305

from . import bench as bench_mod
from . import codec, core
from .codec import DecodeError
from .keystore import Keystore, KeystoreError, valid_name
from .pairing import CURVES, DEFAULT_CURVE, DeterministicRandom, SystemRandom

EXIT_OK = 0
EXIT_ENV = 2
EXIT_VALIDATION = 3
EXIT_CRYPTO = 4

OPAQUE_MSG = "invalid ciphertext or unauthorized"

HYB_MAGIC = b"KAPREHYB"
HYB_VERSION = 1
_HYB_AAD = HYB_MAGIC + bytes([HYB_VERSION])
_NONCE_LEN = 12


def _err(msg: str) -> None:
    print(f"kapre: {msg}", file=sys.stderr)


def _emit(args, human: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _rng(args):
    if args.seed is not None:
        return DeterministicRandom(args.seed)
    return SystemRandom()


def _store(args) -> Keystore:
    root = args.keystore or os.environ.get("KAPRE_KEYSTORE") or "./keystore"
    return Keystore(root)


# ---------------------------------------------------------------- hybrid

def _aead(content_key: bytes) -> ChaCha20Poly1305:
    return ChaCha20Poly1305(hashlib.sha256(b"kapre-hybrid-key" + content_key).digest())


def wrap_hybrid(inner_envelope: bytes, content_key: bytes, body: bytes, nonce: bytes) -> bytes:
    ct = _aead(content_key).encrypt(nonce, body, _HYB_AAD)
    return HYB_MAGIC + bytes([HYB_VERSION]) + struct.pack(">I", len(inner_envelope)) + inner_envelope + nonce + ct


def split_hybrid(blob: bytes) -> tuple[bytes, bytes, bytes]:
    """-> (inner envelope, nonce, aead ciphertext); raises DecodeError."""
    if len(blob) < len(HYB_MAGIC) + 5 or not blob.startswith(HYB_MAGIC):
        raise DecodeError("not a hybrid container")
    if blob[len(HYB_MAGIC)] != HYB_VERSION:
        raise DecodeError("unsupported hybrid version")
    off = len(HYB_MAGIC) + 1
    (inner_len,) = struct.unpack(">I", blob[off : off + 4])
    off += 4
    inner = blob[off : off + inner_len]
    if len(inner) != inner_len:
        raise DecodeError("truncated hybrid container")
    off += inner_len
    nonce, ct = blob[off : off + _NONCE_LEN], blob[off + _NONCE_LEN :]
    if len(nonce) != _NONCE_LEN or len(ct) < 16:
        raise DecodeError("truncated hybrid container")
    return inner, nonce, ct


def unwrap_hybrid(content_key: bytes, nonce: bytes, ct: bytes) -> bytes:
    return _aead(content_key).decrypt(nonce, ct, _HYB_AAD)


def is_hybrid(blob: bytes) -> bool:
    return blob.startswith(HYB_MAGIC)


# ---------------------------------------------------------------- commands

def cmd_setup(args) -> int:
    if args.l < core.MIN_MESSAGE_LEN:
        _err(f"--l must be at least {core.MIN_MESSAGE_LEN}")
        return EXIT_ENV
    store = _store(args)
    if store.has_params() and not args.force:
        _err(f"params already exist at {store.params_path}; use --force to replace")
        return EXIT_ENV
    par = core.setup(args.curve, l=args.l, rng=_rng(args))
    path = store.save_params(par, force=args.force)
    fp = store.params_fingerprint().hex()
    _emit(args, f"params written to {path} (curve {args.curve}, l={args.l}, fingerprint {fp})",
          {"command": "setup", "path": str(path), "curve": args.curve, "l": args.l, "fingerprint": fp})
    return EXIT_OK


def cmd_keygen(args) -> int:
    if not valid_name(args.name):
        _err(f"invalid user name {args.name!r} (letters, digits, underscore)")
        return EXIT_VALIDATION
    if args.types < 1:
        _err("--types must be at least 1")
        return EXIT_VALIDATION
    store = _store(args)
    if store.user_exists(args.name):
        _err(f"user {args.name!r} already exists; use --force to replace")
        return EXIT_ENV
    par = store.load_params()
    pk, sk = core.keygen(par, args.types, _rng(args))
    store.save_user(args.name, pk, sk, force=args.force)
    fp = codec.key_fingerprint(pk).hex()
    _emit(args, f"keys for {args.name} written ({args.types} types, public fingerprint {fp})",
          {"command": "keygen", "name": args.name, "types": args.types, "fingerprint": fp})
    return EXIT_OK


def _parse_set(text: str) -> frozenset[int]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    return frozenset(int(part) for part in items)


def cmd_grant(args) -> int:
    for name in (args.src, args.dst):
        if not valid_name(name):
            _err(f"invalid user name {name!r}")
            return EXIT_VALIDATION
    try:
        S = _parse_set(args.set)
    except ValueError:
        _err(f"--set must be a comma-separated list of integers, got {args.set!r}")
        return EXIT_VALIDATION
    store = _store(args)
    par = store.load_params()
    sk_i = store.load_secret(args.src)
    pk_i = store.load_public(args.src)
    pk_j = store.load_public(args.dst)
    bad = [v for v in S if not 1 <= v <= sk_i.n]
    if bad:
        _err(f"type indices {sorted(bad)} outside 1..{sk_i.n}")
        return EXIT_VALIDATION
    if not S:
        _err("warning: empty type set; the grant re-encrypts nothing")
    rk = core.rekeygen(par, S, sk_i, pk_i, pk_j)
    path = store.save_grant(args.src, args.dst, rk)
    _emit(args, f"grant {args.src} -> {args.dst} written to {path} (types {sorted(S)})",
          {"command": "grant", "from": args.src, "to": args.dst, "set": sorted(S), "path": str(path)})
    return EXIT_OK


def _ct_envelope(store: Keystore, ct, pk) -> bytes:
    return codec.encode(ct, params_fp=store.params_fingerprint(), key_hint=codec.key_fingerprint(pk))


def cmd_encrypt(args) -> int:
    if args.level == 2 and args.type is None:
        _err("level-2 encryption needs --type")
        return EXIT_ENV
    if args.level == 1 and args.type is not None:
        _err("--type only applies to level-2 encryption")
        return EXIT_ENV
    store = _store(args)
    par = store.load_params()
    pk = store.load_public(args.recipient)
    if args.level == 2 and not 1 <= args.type <= pk.n:
        _err(f"--type must be in 1..{pk.n}")
        return EXIT_VALIDATION
    src = Path(args.input)
    if not src.is_file():
        _err(f"no such input file: {src}")
        return EXIT_ENV
    body = src.read_bytes()
    rng = _rng(args)

    if args.raw:
        if len(body) != par.l:
            _err(f"--raw input must be exactly {par.l} bytes, got {len(body)}")
            return EXIT_VALIDATION
        payload = body
    else:
        payload = rng.fill(par.l)

    if args.level == 2:
        ct = core.enc2(par, pk, payload, args.type, rng)
        suffix = ".kct2"
    else:
        ct = core.enc1(par, pk, payload, rng)
        suffix = ".kct1"
    envelope = _ct_envelope(store, ct, pk)
    blob = envelope if args.raw else wrap_hybrid(envelope, payload, body, rng.fill(_NONCE_LEN))

    out = Path(args.out) if args.out else Path(str(src) + suffix)
    out.write_bytes(blob)
    _emit(args, f"encrypted {src} -> {out} (level {args.level}, {len(blob)} bytes)",
          {"command": "encrypt", "input": str(src), "output": str(out),
           "level": args.level, "type": args.type, "bytes": len(blob)})
    return EXIT_OK


def cmd_reencrypt(args) -> int:
    store = _store(args)
    par = store.load_params()
    pk_i = store.load_public(args.src)
    rk = store.load_grant(args.src, args.dst)
    src = Path(args.input)
    if not src.is_file():
        _err(f"no such input file: {src}")
        return EXIT_ENV
    blob = src.read_bytes()

    try:
        if is_hybrid(blob):
            inner, nonce, aead_ct = split_hybrid(blob)
            decoded = codec.decode(inner, ctx=par.ctx)
        else:
            decoded = codec.load_envelope(blob, ctx=par.ctx)
            inner = nonce = aead_ct = None
        if decoded.kind != "ct2":
            raise core.RejectedCiphertext("only second-level ciphertexts can be re-encrypted")
        if decoded.params_fp != store.params_fingerprint():
            raise core.RejectedCiphertext("parameter mismatch")
        ct1 = core.reenc(par, pk_i, rk, decoded.obj, _rng(args))
    except (DecodeError, core.RejectedCiphertext, ValueError):
        _err(OPAQUE_MSG)
        return EXIT_CRYPTO

    envelope = codec.encode(ct1, params_fp=decoded.params_fp, key_hint=decoded.key_hint)
    out_blob = envelope if nonce is None else (
        HYB_MAGIC + bytes([HYB_VERSION]) + struct.pack(">I", len(envelope)) + envelope + nonce + aead_ct
    )
    if args.out:
        out = Path(args.out)
    elif src.suffix == ".kct2":
        out = src.with_suffix(".kct1")
    else:
        out = Path(str(src) + ".kct1")
    out.write_bytes(out_blob)
    _emit(args, f"re-encrypted {src} -> {out} for {args.dst}",
          {"command": "reencrypt", "input": str(src), "output": str(out),
           "from": args.src, "to": args.dst})
    return EXIT_OK


def cmd_decrypt(args) -> int:
    store = _store(args)
    par = store.load_params()
    sk = store.load_secret(args.user)
    src = Path(args.input)
    if not src.is_file():
        _err(f"no such input file: {src}")
        return EXIT_ENV
    blob = src.read_bytes()
    rng = _rng(args)

    try:
        if is_hybrid(blob):
            inner, nonce, aead_ct = split_hybrid(blob)
            decoded = codec.decode(inner, ctx=par.ctx)
        else:
            decoded = codec.load_envelope(blob, ctx=par.ctx)
            nonce = aead_ct = None
        if decoded.params_fp != store.params_fingerprint():
            raise core.RejectedCiphertext("parameter mismatch")
        if decoded.kind == "ct2":
            payload = core.dec2(par, sk, store.load_public(args.user), decoded.obj, rng)
        elif decoded.kind == "ct1":
            payload = core.dec1(par, sk, decoded.obj)
        else:
            raise core.RejectedCiphertext("not a ciphertext envelope")
        body = payload if nonce is None else unwrap_hybrid(payload, nonce, aead_ct)
    except (DecodeError, core.RejectedCiphertext, InvalidTag, ValueError):
        _err(OPAQUE_MSG)
        return EXIT_CRYPTO

    if args.out:
        out = Path(args.out)
    else:
        out = src.with_suffix("") if src.suffix in (".kct1", ".kct2") else Path(str(src) + ".out")
        if out.exists():
            _err(f"{out} already exists; pass --out to choose a destination")
            return EXIT_ENV
    out.write_bytes(body)
    _emit(args, f"decrypted {src} -> {out} ({len(body)} bytes)",
          {"command": "decrypt", "input": str(src), "output": str(out), "bytes": len(body)})
    return EXIT_OK


def _inspect_envelope(decoded: codec.Decoded, nbytes: int) -> dict:
    obj = decoded.obj
    info = {
        "kind": decoded.kind,
        "bytes": nbytes,
        "params_fingerprint": decoded.params_fp.hex(),
        "key_hint": decoded.key_hint.hex(),
    }
    if decoded.kind == "params":
        info.update(curve=obj.ctx.name, l=obj.l)
    elif decoded.kind == "public-key":
        info.update(curve=obj.pk1.ctx.name, types=obj.n,
                    fingerprint=codec.key_fingerprint(obj).hex())
    elif decoded.kind == "secret-key":
        info.update(types=obj.n)  # scalars never printed
    elif decoded.kind == "rekey":
        info.update(set=sorted(obj.S), token_bytes=len(codec.encode_rekey_token(obj)))
    elif decoded.kind == "ct2":
        info.update(type=obj.rho)
    return info


def cmd_inspect(args) -> int:
    src = Path(args.file)
    if not src.is_file():
        _err(f"no such file: {src}")
        return EXIT_ENV
    blob = src.read_bytes()
    try:
        if is_hybrid(blob):
            inner, _nonce, aead_ct = split_hybrid(blob)
            info = _inspect_envelope(codec.decode(inner), len(blob))
            info.update(container="hybrid", body_bytes=len(aead_ct) - 16)
        else:
            info = _inspect_envelope(codec.load_envelope(blob), len(blob))
    except DecodeError as exc:
        _err(f"unreadable envelope: {exc}")
        return EXIT_CRYPTO
    if args.json:
        print(json.dumps(info, sort_keys=True))
    else:
        for key in sorted(info):
            print(f"{key}: {info[key]}")
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        n_values = [int(x) for x in args.n.split(",") if x.strip()]
        fractions = [float(x) for x in args.set_frac.split(",") if x.strip()]
    except ValueError:
        _err("--n takes comma-separated integers, --set-frac comma-separated floats")
        return EXIT_VALIDATION
    if not n_values or not fractions or args.iters < 30:
        _err("need at least one n, one fraction, and --iters >= 30")
        return EXIT_VALIDATION
    report = bench_mod.run_sweep(n_values, fractions, args.iters,
                                 curve=args.curve, seed=args.seed)
    if args.out:
        path = bench_mod.emit_csv(report, args.out)
        _err(f"wrote {path}")
    if args.json:
        print(json.dumps([r.__dict__ for r in report.rows]))
    else:
        print(report.summary())
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--keystore", metavar="DIR",
                        help="keystore root (default: $KAPRE_KEYSTORE or ./keystore)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, metavar="N",
                        help="deterministic randomness; requires --insecure-test-mode")
    common.add_argument("--insecure-test-mode", action="store_true",
                        help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="kapre",
        description="Key-aggregate proxy re-encryption over a pairing group.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", parents=[common], help="generate shared parameters")
    p.add_argument("--curve", choices=sorted(CURVES), default=DEFAULT_CURVE)
    p.add_argument("--l", type=int, default=32, help="message length in bytes (min 16)")
    p.add_argument("--force", action="store_true", help="replace existing params")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("keygen", parents=[common], help="create a user key pair")
    p.add_argument("name")
    p.add_argument("--types", type=int, required=True, help="number of type indices n")
    p.add_argument("--force", action="store_true", help="replace existing keys")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("grant", parents=[common],
                       help="create a re-encryption grant for a type set")
    p.add_argument("src", metavar="from")
    p.add_argument("dst", metavar="to")
    p.add_argument("--set", required=True, help='comma-separated type indices, e.g. "1,3,5"')
    p.set_defaults(func=cmd_grant)

    p = sub.add_parser("encrypt", parents=[common], help="encrypt a file for a user")
    p.add_argument("input")
    p.add_argument("--for", dest="recipient", required=True, metavar="NAME")
    p.add_argument("--type", type=int, help="type index for level-2 encryption")
    p.add_argument("--level", type=int, choices=(1, 2), default=2)
    p.add_argument("--raw", action="store_true",
                   help="encrypt an exactly-l-byte payload directly (no hybrid wrapping)")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("reencrypt", parents=[common],
                       help="transform a level-2 ciphertext under a grant")
    p.add_argument("input")
    p.add_argument("--from", dest="src", required=True, metavar="NAME")
    p.add_argument("--to", dest="dst", required=True, metavar="NAME")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_reencrypt)

    p = sub.add_parser("decrypt", parents=[common], help="decrypt either ciphertext level")
    p.add_argument("input")
    p.add_argument("--as", dest="user", required=True, metavar="NAME")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("inspect", parents=[common], help="print envelope metadata")
    p.add_argument("file")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("bench", parents=[common], help="run the timing/size sweep")
    p.add_argument("--n", default="4,8", help="comma-separated type counts")
    p.add_argument("--set-frac", default="0.25,1.0", dest="set_frac",
                   help="comma-separated |S|/n fractions")
    p.add_argument("--iters", type=int, default=30)
    p.add_argument("--curve", choices=sorted(CURVES), default="ss512")
    p.add_argument("--out", metavar="CSV")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and not args.insecure_test_mode:
        _err("--seed is for tests only; it requires --insecure-test-mode")
        return EXIT_ENV
    try:
        return args.func(args)
    except KeystoreError as exc:
        _err(str(exc))
        return EXIT_ENV
    except OSError as exc:
        _err(str(exc))
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
