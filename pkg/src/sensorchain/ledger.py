"""Hash-chained ledger of battery-life prediction blocks.

Single-authority model: only holders of a registered Ed25519 signing key
can produce blocks that validate. Every block's SHA-256 hash covers a
canonical byte serialization of its content, and each block carries its
predecessor's hash, so any mutation of committed data breaks either a
hash, a signature, or the linkage.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from dataclasses import dataclass
from datetime import date as _date
from pathlib import Path
from typing import IO

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

ZERO_HASH = "0" * 64
GENESIS_NETWORK_ID = "GENESIS"

# Serialization order of the signed/hashed content fields.
CONTENT_FIELDS = (
    "index",
    "network_id",
    "predicted_battery_life",
    "date_of_prediction",
    "created_at",
    "prev_hash",
    "creator_key_id",
)


class BadDateError(ValueError):
    """date_of_prediction is not an ISO-8601 calendar date."""


class NonFiniteValueError(ValueError):
    """Predicted battery life is NaN or infinite."""


class UnauthorizedKeyError(ValueError):
    """Signing key is not registered with the authority set."""


@dataclass(frozen=True)
class BlockValidationError(Exception):
    """One failed validation check, with a machine-readable code."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ChainValidationFailure:
    """First chain index whose block failed validation, and why."""

    index: int
    error: BlockValidationError


class TamperDetectedError(Exception):
    def __init__(self, failure: ChainValidationFailure):
        super().__init__(f"chain invalid at index {failure.index}: {failure.error}")
        self.failure = failure


class CorruptChainFileError(Exception):
    def __init__(self, index: int, reason: str):
        super().__init__(f"chain file corrupt at block {index}: {reason}")
        self.index = index
        self.reason = reason


@dataclass(frozen=True)
class PredictionBlock:
    """One ledger entry; signature and hash are hex strings."""

    index: int
    network_id: str
    predicted_battery_life: float
    date_of_prediction: str
    created_at: int
    prev_hash: str
    creator_key_id: str
    signature: str
    hash: str

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "network_id": self.network_id,
            "predicted_battery_life": self.predicted_battery_life,
            "date_of_prediction": self.date_of_prediction,
            "created_at": self.created_at,
            "prev_hash": self.prev_hash,
            "creator_key_id": self.creator_key_id,
            "signature": self.signature,
            "hash": self.hash,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PredictionBlock":
        return cls(
            index=int(data["index"]),
            network_id=str(data["network_id"]),
            predicted_battery_life=float(data["predicted_battery_life"]),
            date_of_prediction=str(data["date_of_prediction"]),
            created_at=int(data["created_at"]),
            prev_hash=str(data["prev_hash"]),
            creator_key_id=str(data["creator_key_id"]),
            signature=str(data["signature"]),
            hash=str(data["hash"]),
        )


@dataclass(frozen=True)
class ChainState:
    """Immutable chain value; append returns a new state."""

    blocks: tuple[PredictionBlock, ...]

    @property
    def head(self) -> PredictionBlock:
        return self.blocks[-1]

    @property
    def head_hash(self) -> str:
        return self.blocks[-1].hash

    def __len__(self) -> int:
        return len(self.blocks)


class AuthorityKeys:
    """Ed25519 signing keypair of a block-creating authority."""

    def __init__(self, key_id: str, private_key: Ed25519PrivateKey):
        self.key_id = key_id
        self.private_key = private_key
        self.public_key = private_key.public_key()

    @classmethod
    def generate(cls, key_id: str, seed: bytes | None = None) -> "AuthorityKeys":
        """Fresh keypair; pass 32 seed bytes for a reproducible key."""
        if seed is None:
            return cls(key_id, Ed25519PrivateKey.generate())
        return cls(key_id, Ed25519PrivateKey.from_private_bytes(seed))

    def sign(self, data: bytes) -> str:
        return self.private_key.sign(data).hex()

    def public_key_hex(self) -> str:
        return self.public_key.public_bytes_raw().hex()

    def to_file(self, path: str | Path) -> None:
        payload = {
            "key_id": self.key_id,
            "private_key": self.private_key.private_bytes_raw().hex(),
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n")

    @classmethod
    def from_file(cls, path: str | Path) -> "AuthorityKeys":
        payload = json.loads(Path(path).read_text())
        private = Ed25519PrivateKey.from_private_bytes(bytes.fromhex(payload["private_key"]))
        return cls(payload["key_id"], private)


class KeyRegistry:
    """Public keys every peer trusts, keyed by creator key id."""

    def __init__(self, keys: dict[str, Ed25519PublicKey] | None = None):
        self._keys = dict(keys or {})

    @classmethod
    def from_authorities(cls, *authorities: AuthorityKeys) -> "KeyRegistry":
        return cls({a.key_id: a.public_key for a in authorities})

    def to_file(self, path: str | Path) -> None:
        payload = {
            key_id: public.public_bytes_raw().hex()
            for key_id, public in sorted(self._keys.items())
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n")

    @classmethod
    def from_file(cls, path: str | Path) -> "KeyRegistry":
        payload = json.loads(Path(path).read_text())
        return cls({
            key_id: Ed25519PublicKey.from_public_bytes(bytes.fromhex(hex_key))
            for key_id, hex_key in payload.items()
        })

    def __contains__(self, key_id: str) -> bool:
        return key_id in self._keys

    def verify(self, key_id: str, signature_hex: str, data: bytes) -> bool:
        public = self._keys.get(key_id)
        if public is None:
            return False
        try:
            public.verify(bytes.fromhex(signature_hex), data)
        except (InvalidSignature, ValueError):
            return False
        return True


def _encode_field(text: str) -> bytes:
    raw = text.encode("utf-8")
    return struct.pack(">I", len(raw)) + raw


def _preimage(
    index: int,
    network_id: str,
    predicted_battery_life: float,
    date_of_prediction: str,
    created_at: int,
    prev_hash: str,
    creator_key_id: str,
) -> bytes:
    """Canonical signed/hashed bytes: each field length-prefixed UTF-8.

    Field order follows CONTENT_FIELDS; the float is rendered as its
    shortest round-trip decimal so the bytes are platform-independent.
    """
    parts = (
        str(index),
        network_id,
        repr(float(predicted_battery_life)),
        date_of_prediction,
        str(created_at),
        prev_hash,
        creator_key_id,
    )
    return b"".join(_encode_field(p) for p in parts)


def canonical_bytes(block: PredictionBlock) -> bytes:
    """Canonical preimage of a block (signature and hash excluded)."""
    return _preimage(
        block.index,
        block.network_id,
        block.predicted_battery_life,
        block.date_of_prediction,
        block.created_at,
        block.prev_hash,
        block.creator_key_id,
    )


def _finish_block(fields: dict, keys: AuthorityKeys) -> PredictionBlock:
    preimage = _preimage(**fields)
    signature = keys.sign(preimage)
    digest = hashlib.sha256(preimage).hexdigest()
    return PredictionBlock(**fields, signature=signature, hash=digest)


def create_genesis(keys: AuthorityKeys, created_at: int = 0) -> PredictionBlock:
    """Fixed index-0 anchor block, signed by the authority."""
    return _finish_block(
        {
            "index": 0,
            "network_id": GENESIS_NETWORK_ID,
            "predicted_battery_life": 0.0,
            "date_of_prediction": "1970-01-01",
            "created_at": created_at,
            "prev_hash": ZERO_HASH,
            "creator_key_id": keys.key_id,
        },
        keys,
    )


def _check_date(text: str) -> bool:
    try:
        _date.fromisoformat(text)
    except (ValueError, TypeError):
        return False
    return True


def create_block(
    network_id: str,
    bl: float,
    date: str,
    chain: ChainState,
    keys: AuthorityKeys,
    registry: KeyRegistry | None = None,
    created_at: int = 0,
) -> PredictionBlock:
    """Sign and hash a block linked to the chain head; not yet appended.

    Appending stays separate so peers can vote on the block first. With a
    registry supplied, the signer must be registered and the chain must
    validate in full.
    """
    if not _check_date(date):
        raise BadDateError(f"date_of_prediction must be ISO-8601 (YYYY-MM-DD), got {date!r}")
    if not math.isfinite(bl):
        raise NonFiniteValueError(f"predicted battery life must be finite, got {bl}")
    if registry is not None:
        if keys.key_id not in registry:
            raise UnauthorizedKeyError(f"key id {keys.key_id!r} is not registered")
        failure = validate_chain(chain, registry)
        if failure is not None:
            raise TamperDetectedError(failure)
    head = chain.head
    return _finish_block(
        {
            "index": head.index + 1,
            "network_id": network_id,
            "predicted_battery_life": float(bl),
            "date_of_prediction": date,
            "created_at": created_at,
            "prev_hash": head.hash,
            "creator_key_id": keys.key_id,
        },
        keys,
    )


def validate_block(
    block: PredictionBlock,
    predecessor: PredictionBlock | None,
    registry: KeyRegistry,
) -> BlockValidationError | None:
    """Run the validation checklist; None means the block is good.

    Order: hash recomputation, signature, index linkage, prev_hash
    linkage, date format, finite value. The first failure wins.
    """
    preimage = canonical_bytes(block)
    if hashlib.sha256(preimage).hexdigest() != block.hash:
        return BlockValidationError("hash-mismatch", "stored hash does not match content")
    if block.creator_key_id not in registry:
        return BlockValidationError(
            "unauthorized-key", f"unknown creator key id {block.creator_key_id!r}"
        )
    if not registry.verify(block.creator_key_id, block.signature, preimage):
        return BlockValidationError("signature-invalid", "signature does not verify")
    expected_index = 0 if predecessor is None else predecessor.index + 1
    if block.index != expected_index:
        return BlockValidationError(
            "index-broken", f"expected index {expected_index}, got {block.index}"
        )
    expected_prev = ZERO_HASH if predecessor is None else predecessor.hash
    if block.prev_hash != expected_prev:
        return BlockValidationError("linkage-broken", "prev_hash does not match predecessor")
    if not _check_date(block.date_of_prediction):
        return BlockValidationError(
            "bad-date", f"invalid date {block.date_of_prediction!r}"
        )
    if not math.isfinite(block.predicted_battery_life):
        return BlockValidationError("non-finite-value", "predicted battery life is not finite")
    return None


def validate_chain(chain: ChainState, registry: KeyRegistry) -> ChainValidationFailure | None:
    """Full scan from genesis; reports the first failing index."""
    if not chain.blocks:
        return ChainValidationFailure(0, BlockValidationError("empty-chain", "chain has no blocks"))
    predecessor = None
    for i, block in enumerate(chain.blocks):
        error = validate_block(block, predecessor, registry)
        if error is not None:
            return ChainValidationFailure(i, error)
        predecessor = block
    return None


def append(chain: ChainState, block: PredictionBlock, registry: KeyRegistry) -> ChainState:
    """New chain state with the block at the tail; history never mutates."""
    failure = validate_chain(chain, registry)
    if failure is not None:
        raise TamperDetectedError(failure)
    error = validate_block(block, chain.head, registry)
    if error is not None:
        raise error
    return ChainState(blocks=chain.blocks + (block,))


def query_by_network_id(chain: ChainState, network_id: str) -> list[PredictionBlock]:
    """Blocks for one sensor group in insertion order; genesis excluded."""
    return [b for b in chain.blocks[1:] if b.network_id == network_id]


def persist(chain: ChainState, sink: str | Path | IO[str]) -> None:
    """Write the chain as JSON lines, one block per line, keys sorted."""
    lines = "".join(json.dumps(b.to_dict(), sort_keys=True) + "\n" for b in chain.blocks)
    if hasattr(sink, "write"):
        sink.write(lines)
    else:
        Path(sink).write_text(lines, encoding="utf-8")


def read_chain_file(source: str | Path | IO[str]) -> ChainState:
    """Parse a chain file without validating it."""
    text = source.read() if hasattr(source, "read") else Path(source).read_text(encoding="utf-8")
    blocks = []
    for i, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        try:
            blocks.append(PredictionBlock.from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CorruptChainFileError(i, f"unparseable block: {exc}") from None
    if not blocks:
        raise CorruptChainFileError(0, "file contains no blocks")
    return ChainState(blocks=tuple(blocks))


def load(source: str | Path | IO[str], registry: KeyRegistry) -> ChainState:
    """Parse and fully re-validate a chain file; refuses corrupt files."""
    chain = read_chain_file(source)
    failure = validate_chain(chain, registry)
    if failure is not None:
        raise CorruptChainFileError(failure.index, str(failure.error))
    return chain


def resign_block(block: PredictionBlock, keys: AuthorityKeys, **changes) -> PredictionBlock:
    """Rebuild a block with changed fields, re-signed and re-hashed.

    Test and tooling helper for constructing insider-tampered blocks; the
    successor's prev_hash still exposes the edit.
    """
    fields = {name: getattr(block, name) for name in CONTENT_FIELDS}
    fields.update(changes)
    return _finish_block(fields, keys)
