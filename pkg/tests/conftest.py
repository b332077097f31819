"""Shared fixtures.  Everything runs on the small ss512 parameter set so the
suite stays fast; the arithmetic is identical across parameter sets."""

import pytest

from kapre import core
from kapre.pairing import DeterministicRandom, get_context

TEST_CURVE = "ss512"


@pytest.fixture(scope="session")
def ctx():
    return get_context(TEST_CURVE)


@pytest.fixture(scope="session")
def par():
    return core.setup(TEST_CURVE, l=32, rng=DeterministicRandom(0xA11CE))


@pytest.fixture(scope="session")
def users(par):
    """Two key pairs with n=8: (pk_i, sk_i, pk_j, sk_j)."""
    rng = DeterministicRandom(0xB0B)
    pk_i, sk_i = core.keygen(par, 8, rng)
    pk_j, sk_j = core.keygen(par, 8, rng)
    return pk_i, sk_i, pk_j, sk_j


@pytest.fixture()
def rng():
    """Fresh deterministic stream per test."""
    return DeterministicRandom(0xDEC0DE)
