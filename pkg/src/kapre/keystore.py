"""Directory-based keystore for the CLI.

Layout:

    <root>/params.kpar
    <root>/users/<name>/key.kpub
    <root>/users/<name>/key.ksec      (owner-only permissions)
    <root>/grants/<from>-<to>.krk

Entries are armored envelopes.  Names must match [A-Za-z0-9_]+ — the dash
is reserved as the grant-filename separator.  Writes go through a temp file
and os.replace, so concurrent readers never see a torn entry and concurrent
writers last-write-win atomically.
"""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path

from . import codec
from .core import Params, PublicKey, ReKey, SecretKey

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


class KeystoreError(Exception):
    """Missing, duplicate or malformed keystore entries."""


def valid_name(name: str) -> bool:
    return bool(_NAME_RE.match(name)) and len(name) <= 64


def _require_name(name: str) -> str:
    if not valid_name(name):
        raise KeystoreError(
            f"invalid name {name!r}: use 1-64 characters from [A-Za-z0-9_]"
        )
    return name


def _atomic_write(path: Path, data: bytes, secret: bool = False) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        # mkstemp creates 0600; keep that for secrets, open up public entries
        os.fchmod(fd, 0o600 if secret else 0o644)
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


class Keystore:
    """One params set plus named users and grants under a root directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._params: Params | None = None

    # -- paths --

    @property
    def params_path(self) -> Path:
        return self.root / "params.kpar"

    def user_dir(self, name: str) -> Path:
        return self.root / "users" / _require_name(name)

    def public_path(self, name: str) -> Path:
        return self.user_dir(name) / "key.kpub"

    def secret_path(self, name: str) -> Path:
        return self.user_dir(name) / "key.ksec"

    def grant_path(self, frm: str, to: str) -> Path:
        return self.root / "grants" / f"{_require_name(frm)}-{_require_name(to)}.krk"

    # -- params --

    def has_params(self) -> bool:
        return self.params_path.exists()

    def save_params(self, par: Params, force: bool = False) -> Path:
        if self.has_params() and not force:
            raise KeystoreError(f"params already exist at {self.params_path}")
        _atomic_write(self.params_path, codec.armor(codec.encode(par)).encode())
        self._params = par
        return self.params_path

    def load_params(self) -> Params:
        if self._params is None:
            dec = self._load(self.params_path, "params", ctx=None)
            self._params = dec.obj
        return self._params

    def params_fingerprint(self) -> bytes:
        return codec.params_fingerprint(self.load_params())

    # -- users --

    def user_exists(self, name: str) -> bool:
        return self.public_path(name).exists() or self.secret_path(name).exists()

    def save_user(self, name: str, pk: PublicKey, sk: SecretKey, force: bool = False) -> None:
        if self.user_exists(name) and not force:
            raise KeystoreError(f"user {name!r} already exists")
        ctx = self.load_params().ctx
        _atomic_write(self.public_path(name), codec.armor(codec.encode(pk)).encode())
        _atomic_write(
            self.secret_path(name),
            codec.armor(codec.encode(sk, ctx=ctx)).encode(),
            secret=True,
        )

    def load_public(self, name: str) -> PublicKey:
        return self._load(self.public_path(name), "public-key").obj

    def load_secret(self, name: str) -> SecretKey:
        return self._load(self.secret_path(name), "secret-key").obj

    # -- grants --

    def save_grant(self, frm: str, to: str, rk: ReKey, force: bool = False) -> Path:
        path = self.grant_path(frm, to)
        if path.exists() and not force:
            raise KeystoreError(f"grant {frm}->{to} already exists")
        _atomic_write(path, codec.armor(codec.encode(rk)).encode())
        return path

    def load_grant(self, frm: str, to: str) -> ReKey:
        return self._load(self.grant_path(frm, to), "rekey").obj

    # -- shared --

    def _load(self, path: Path, expect_kind: str, ctx=...) -> codec.Decoded:
        if not path.exists():
            raise KeystoreError(f"missing keystore entry: {path}")
        if ctx is ...:
            ctx = self.load_params().ctx
        try:
            dec = codec.load_envelope(path.read_bytes(), ctx)
        except codec.DecodeError as e:
            raise KeystoreError(f"corrupt keystore entry {path}: {e}") from e
        if dec.kind != expect_kind:
            raise KeystoreError(f"{path} holds a {dec.kind}, expected {expect_kind}")
        return dec
