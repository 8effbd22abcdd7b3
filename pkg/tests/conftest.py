import importlib.resources
from pathlib import Path

import pytest

from sensorchain import ingest, ledger

TESTDATA = Path(__file__).parent / "testdata"

FIXTURE_KEY_SEED = b"\x11" * 32


@pytest.fixture(scope="session")
def sample_csv_path() -> Path:
    path = importlib.resources.files("sensorchain") / "data" / "beach_water_sample.csv"
    return Path(str(path))


@pytest.fixture(scope="session")
def sample_records(sample_csv_path):
    with open(sample_csv_path, "rb") as f:
        return ingest.parse_csv(f)


@pytest.fixture(scope="session")
def authority():
    return ledger.AuthorityKeys.generate("test-authority", seed=FIXTURE_KEY_SEED)


@pytest.fixture(scope="session")
def registry(authority):
    return ledger.KeyRegistry.from_authorities(authority)


@pytest.fixture()
def genesis(authority):
    return ledger.create_genesis(authority)


@pytest.fixture()
def chain(genesis):
    return ledger.ChainState(blocks=(genesis,))


def build_chain(authority, registry, values, network_id="NET-01"):
    """Chain of len(values)+1 blocks with the given battery-life values."""
    chain = ledger.ChainState(blocks=(ledger.create_genesis(authority),))
    for i, bl in enumerate(values):
        block = ledger.create_block(
            network_id=network_id,
            bl=bl,
            date=f"2021-03-{(i % 28) + 1:02d}",
            chain=chain,
            keys=authority,
            registry=registry,
            created_at=100 + i,
        )
        chain = ledger.append(chain, block, registry)
    return chain


MUTABLE_FIELDS = (
    "index", "network_id", "predicted_battery_life", "date_of_prediction",
    "created_at", "prev_hash", "creator_key_id", "signature",
)


def mutate_field(block, field, rng):
    """A copy of the block with one field changed; rng is random.Random."""
    import dataclasses

    if field in ("index", "created_at"):
        return dataclasses.replace(block, **{field: getattr(block, field) + 1})
    if field == "predicted_battery_life":
        return dataclasses.replace(block, predicted_battery_life=block.predicted_battery_life + 0.01)
    if field in ("prev_hash", "signature"):
        raw = bytearray(bytes.fromhex(getattr(block, field)))
        raw[rng.randrange(len(raw))] ^= 0x01
        return dataclasses.replace(block, **{field: raw.hex()})
    return dataclasses.replace(block, **{field: getattr(block, field) + "x"})
