"""Deterministic cryptographic building blocks.

Digest function, signature scheme, and a binary Merkle tree with inclusion
proofs. Everything here is a pure function over immutable values.

Concrete choices (recorded in every metrics report so results are
attributable):

- digest: SHA-256, 32 bytes.
- signatures: Ed25519; key generation is deterministic from a 32-byte seed
  so fixtures are reproducible. Production entropy handling is out of scope.
- Merkle tree: odd level widths duplicate the final node; leaf and interior
  hashing are domain-separated by a one-byte prefix (0x00 leaf, 0x01 node)
  to block second-preimage tree attacks.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .errors import EmptyTreeError, SeedError

__all__ = [
    "DIGEST_ALGORITHM",
    "DIGEST_SIZE",
    "SIGNATURE_SCHEME",
    "SEED_SIZE",
    "LEAF_PREFIX",
    "NODE_PREFIX",
    "KeyPair",
    "MerklePath",
    "digest",
    "leaf_digest",
    "node_digest",
    "keygen",
    "sign",
    "verify_sig",
    "merkle_root",
    "merkle_prove",
    "merkle_verify",
    "path_length",
]

DIGEST_ALGORITHM = "sha256"
DIGEST_SIZE = 32
SIGNATURE_SCHEME = "ed25519"
SEED_SIZE = 32

# Domain separation for tree hashing.
LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"


def digest(data: bytes) -> bytes:
    """32-byte SHA-256 digest; stable across runs and platforms."""
    return hashlib.sha256(data).digest()


def leaf_digest(data: bytes) -> bytes:
    """Hash raw data into a tree leaf under the leaf domain prefix."""
    return digest(LEAF_PREFIX + data)


def node_digest(left: bytes, right: bytes) -> bytes:
    """Combine two child digests under the interior-node domain prefix."""
    return digest(NODE_PREFIX + left + right)


@dataclass(frozen=True)
class KeyPair:
    """Ed25519 keypair. The secret half never enters a serialized artifact."""

    pk: bytes  # 32-byte raw public key
    sk: bytes  # 32-byte private seed

    def __repr__(self) -> str:  # keep sk out of logs and debug output
        return f"KeyPair(pk=0x{self.pk.hex()}, sk=<hidden>)"


def keygen(seed: bytes) -> KeyPair:
    """Deterministic keypair from a 32-byte seed.

    Equal seeds give equal keys; distinct seeds give distinct public keys.
    """
    if not isinstance(seed, (bytes, bytearray)) or len(seed) != SEED_SIZE:
        raise SeedError(f"seed must be exactly {SEED_SIZE} bytes")
    seed = bytes(seed)
    private = Ed25519PrivateKey.from_private_bytes(seed)
    pk = private.public_key().public_bytes(
        encoding=serialization.Encoding.Raw, format=serialization.PublicFormat.Raw
    )
    return KeyPair(pk=pk, sk=seed)


def sign(sk: bytes, message: bytes) -> bytes:
    """Ed25519 signature over the exact message bytes (deterministic)."""
    return Ed25519PrivateKey.from_private_bytes(sk).sign(message)


def verify_sig(pk: bytes, message: bytes, sig: bytes) -> bool:
    """True iff sig was produced by the matching sk over these exact bytes."""
    try:
        Ed25519PublicKey.from_public_bytes(pk).verify(sig, message)
        return True
    except (InvalidSignature, ValueError):
        return False


@dataclass(frozen=True)
class MerklePath:
    """Inclusion path for one leaf: bottom-up (sibling digest, sibling side).

    side is "left" or "right" and names where the sibling sits relative to
    the node being authenticated. For a tree of n >= 2 leaves the path has
    exactly ceil(log2(n)) siblings; a single-leaf tree has an empty path.
    """

    siblings: tuple[tuple[bytes, str], ...]
    leaf_index: int

    def to_json(self) -> list[dict[str, str]]:
        from . import canonical

        return [{"hash": canonical.to_hex(h), "side": side} for h, side in self.siblings]

    @classmethod
    def from_json(cls, items: list[dict[str, str]], leaf_index: int) -> "MerklePath":
        from . import canonical

        return cls(
            siblings=tuple((canonical.from_hex(e["hash"]), e["side"]) for e in items),
            leaf_index=leaf_index,
        )


def _check_leaves(leaves: Sequence[bytes]) -> None:
    if len(leaves) == 0:
        raise EmptyTreeError("Merkle tree needs at least one leaf")
    for leaf in leaves:
        if len(leaf) != DIGEST_SIZE:
            raise ValueError("Merkle leaves must be 32-byte digests")


def merkle_root(leaves: Sequence[bytes]) -> bytes:
    """Root of a binary tree over pre-hashed leaves.

    Odd level widths duplicate the final node. A single leaf is its own root.
    """
    _check_leaves(leaves)
    level = list(leaves)
    while len(level) > 1:
        if len(level) % 2 == 1:
            level.append(level[-1])
        level = [node_digest(level[i], level[i + 1]) for i in range(0, len(level), 2)]
    return level[0]


def merkle_prove(leaves: Sequence[bytes], index: int) -> MerklePath:
    """Inclusion path for leaves[index]; raises IndexError when out of range."""
    _check_leaves(leaves)
    if not 0 <= index < len(leaves):
        raise IndexError(f"leaf index {index} out of range for {len(leaves)} leaves")
    siblings: list[tuple[bytes, str]] = []
    level = list(leaves)
    pos = index
    while len(level) > 1:
        if len(level) % 2 == 1:
            level.append(level[-1])
        sib = pos ^ 1
        side = "left" if sib < pos else "right"
        siblings.append((level[sib], side))
        level = [node_digest(level[i], level[i + 1]) for i in range(0, len(level), 2)]
        pos //= 2
    return MerklePath(siblings=tuple(siblings), leaf_index=index)


def merkle_verify(leaf: bytes, path: MerklePath, root: bytes) -> bool:
    """Recompute the path from leaf to root; True iff it lands on root."""
    node = leaf
    for sibling, side in path.siblings:
        if side == "left":
            node = node_digest(sibling, node)
        elif side == "right":
            node = node_digest(node, sibling)
        else:
            return False
    return node == root


def path_length(n_leaves: int) -> int:
    """Expected proof length for a tree of n leaves: ceil(log2 n), 0 for 1."""
    if n_leaves < 1:
        raise EmptyTreeError("no path for an empty tree")
    return (n_leaves - 1).bit_length()
