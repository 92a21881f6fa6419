"""Deterministic in-process simulation of independent blockchains.

A World holds two or more chains (blocks, pending pool, balances, asset
holdings, contract states), one logical clock, per-observer relayed header
views, and an append-only operation log with cost units. Replaying a
scenario from the same seed reproduces the op log byte for byte.

There is no consensus layer: a header is valid when it extends a chain by
exactly one height with correct prev linkage from genesis. One canonical
chain per ChainId; forks and reorgs do not exist here.

A World is single-writer. Mutations are serialized through the owning
scenario; snapshots are plain data and safe to share across threads.
"""

from __future__ import annotations

import io
import random
from dataclasses import dataclass, field
from typing import Any, Optional

from . import canonical
from .costs import CostTable, format_units
from .errors import (
    BadSignature,
    EmptyPool,
    InsufficientBalance,
    InvariantViolation,
    UnknownChain,
)
from .primitives import KeyPair, digest, keygen, merkle_root, sign, verify_sig

__all__ = [
    "ChainId",
    "GENESIS_PREV",
    "Transaction",
    "BlockHeader",
    "Block",
    "OpRecord",
    "WorldConfig",
    "World",
]

ChainId = str

GENESIS_PREV = b"\x00" * 32


# ------------------------------------------------------------ transactions --

@dataclass(frozen=True)
class Transaction:
    """Signed ledger transaction; payload is a tagged union by `kind`."""

    kind: str  # "transfer" | "anchor" | "contract_call" | "genesis"
    body: dict
    sender: bytes
    nonce: str
    sig: bytes

    def payload(self) -> dict:
        return {
            "kind": self.kind,
            "body": self.body,
            "sender": canonical.to_hex(self.sender),
            "nonce": self.nonce,
        }

    def payload_bytes(self) -> bytes:
        return canonical.dumps_bytes(self.payload())

    @property
    def tx_id(self) -> bytes:
        return digest(self.payload_bytes())

    def verify(self) -> bool:
        return verify_sig(self.sender, self.payload_bytes(), self.sig)

    @classmethod
    def make(cls, kind: str, body: dict, keypair: KeyPair, nonce: str) -> "Transaction":
        unsigned = {
            "kind": kind,
            "body": body,
            "sender": canonical.to_hex(keypair.pk),
            "nonce": nonce,
        }
        sig = sign(keypair.sk, canonical.dumps_bytes(unsigned))
        return cls(kind=kind, body=body, sender=keypair.pk, nonce=nonce, sig=sig)

    def to_json(self) -> dict:
        out = self.payload()
        out["sig"] = canonical.to_hex(self.sig)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Transaction":
        return cls(
            kind=data["kind"],
            body=data["body"],
            sender=canonical.from_hex(data["sender"]),
            nonce=data["nonce"],
            sig=canonical.from_hex(data["sig"]),
        )


# ------------------------------------------------------------------ blocks --

@dataclass(frozen=True)
class BlockHeader:
    chain: ChainId
    height: int
    prev: bytes
    merkle_root: bytes
    timestamp: int

    def to_json(self) -> dict:
        return {
            "chain": self.chain,
            "height": self.height,
            "prev": canonical.to_hex(self.prev),
            "merkleRoot": canonical.to_hex(self.merkle_root),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, data: dict) -> "BlockHeader":
        return cls(
            chain=data["chain"],
            height=data["height"],
            prev=canonical.from_hex(data["prev"]),
            merkle_root=canonical.from_hex(data["merkleRoot"]),
            timestamp=data["timestamp"],
        )

    def header_digest(self) -> bytes:
        return digest(canonical.dumps_bytes(self.to_json()))


@dataclass
class Block:
    header: BlockHeader
    txs: list[Transaction]


@dataclass(frozen=True)
class OpRecord:
    tick: int
    chain: ChainId
    op_kind: str
    cost_units: float
    tx_id: str  # 0x-hex, possibly of a synthetic descriptor

    def csv_row(self) -> str:
        return f"{self.tick},{self.chain},{self.op_kind},{format_units(self.cost_units)},{self.tx_id}"


@dataclass
class _ChainState:
    blocks: list[Block] = field(default_factory=list)
    pending: list[Transaction] = field(default_factory=list)
    balances: dict[str, int] = field(default_factory=dict)
    holdings: dict[str, set[str]] = field(default_factory=dict)
    contracts: dict[str, Any] = field(default_factory=dict)
    minted_value: int = 0
    minted_assets: set[str] = field(default_factory=set)


# ------------------------------------------------------------------- world --

@dataclass(frozen=True)
class WorldConfig:
    chains: tuple[ChainId, ...] = ("C1", "C2")
    seed: int = 42
    current_date: str = "2025-06-15"
    jurisdictions: dict[ChainId, str] = field(default_factory=dict)

    def jurisdiction(self, chain: ChainId) -> str:
        defaults = {"C1": "US", "C2": "SG"}
        return self.jurisdictions.get(chain, defaults.get(chain, "US"))


class World:
    """Single-writer simulation state shared by every protocol module."""

    def __init__(self, config: WorldConfig | None = None, cost_table: CostTable | None = None):
        self.config = config or WorldConfig()
        if len(set(self.config.chains)) != len(self.config.chains):
            raise UnknownChain("chain labels must be unique within a world")
        self.cost_table = cost_table or CostTable()
        self.clock = 0
        self.rng = random.Random(self.config.seed)
        self.chains: dict[ChainId, _ChainState] = {c: _ChainState() for c in self.config.chains}
        self.relayed: dict[tuple[ChainId, ChainId], list[BlockHeader]] = {}
        self.op_log: list[OpRecord] = []

        # registries owned by the identity / credential / xauth modules
        self.did_registry: dict[str, Any] = {}
        self.controller_index: dict[str, str] = {}
        self.status_lists: dict[str, Any] = {}
        self.acceptance_records: dict[ChainId, list[Any]] = {c: [] for c in self.config.chains}
        self.asset_origins: dict[str, ChainId] = {}

        self.anchor_nonces: set[tuple[str, int, bytes]] = set()

        # instrumentation: full credential-signature verifications per chain
        self.verify_counts: dict[str, int] = {}

        self.treasury = keygen(digest(b"xrwa/treasury/" + str(self.config.seed).encode()))
        for chain in self.config.chains:
            self._seal_genesis(chain)

    # -- plumbing ------------------------------------------------------------

    def _chain(self, chain: ChainId) -> _ChainState:
        try:
            return self.chains[chain]
        except KeyError:
            raise UnknownChain(f"unknown chain {chain!r}") from None

    def next_nonce(self) -> str:
        return self.rng.randbytes(8).hex()

    def log_op(self, chain: ChainId, op_kind: str, tx_id: bytes | None = None,
               descriptor: dict | None = None) -> OpRecord:
        """Append one op-log entry, costing it from the calibration table."""
        if tx_id is None:
            descriptor = descriptor or {}
            tx_id = digest(canonical.dumps_bytes({"op": op_kind, **descriptor}))
        rec = OpRecord(
            tick=self.clock,
            chain=chain,
            op_kind=op_kind,
            cost_units=self.cost_table.weight(op_kind),
            tx_id=canonical.to_hex(tx_id),
        )
        self.op_log.append(rec)
        return rec

    def count_verification(self, chain: Optional[ChainId]) -> None:
        key = chain if chain is not None else "local"
        self.verify_counts[key] = self.verify_counts.get(key, 0) + 1

    # -- accounts and assets ---------------------------------------------------

    def mint(self, chain: ChainId, pk: bytes, amount: int) -> None:
        """World-setup mint; the only operation allowed to create value."""
        state = self._chain(chain)
        key = canonical.to_hex(pk)
        state.balances[key] = state.balances.get(key, 0) + amount
        state.minted_value += amount
        self.log_op(chain, "mint", descriptor={"to": key, "amount": amount})

    def mint_asset(self, chain: ChainId, pk: bytes, asset_id: str) -> None:
        """World-setup asset grant; records the asset's origin chain."""
        state = self._chain(chain)
        key = canonical.to_hex(pk)
        state.holdings.setdefault(key, set()).add(asset_id)
        state.minted_assets.add(asset_id)
        self.asset_origins.setdefault(asset_id, chain)
        self.log_op(chain, "mint", descriptor={"to": key, "asset": asset_id})

    def burn_asset(self, chain: ChainId, pk: bytes, asset_id: str) -> None:
        """Remove an asset from a chain entirely (migration bookkeeping)."""
        self.take_asset(chain, pk, asset_id)
        self._chain(chain).minted_assets.discard(asset_id)
        self.log_op(chain, "burn", descriptor={"asset": asset_id})

    def balance(self, chain: ChainId, pk: bytes) -> int:
        return self._chain(chain).balances.get(canonical.to_hex(pk), 0)

    def assets_of(self, chain: ChainId, pk: bytes) -> set[str]:
        return set(self._chain(chain).holdings.get(canonical.to_hex(pk), set()))

    def debit(self, chain: ChainId, pk: bytes, amount: int) -> None:
        state = self._chain(chain)
        key = canonical.to_hex(pk)
        if state.balances.get(key, 0) < amount:
            raise InsufficientBalance(f"{key} holds {state.balances.get(key, 0)} < {amount}")
        state.balances[key] = state.balances.get(key, 0) - amount

    def credit(self, chain: ChainId, pk: bytes, amount: int) -> None:
        state = self._chain(chain)
        key = canonical.to_hex(pk)
        state.balances[key] = state.balances.get(key, 0) + amount

    def take_asset(self, chain: ChainId, pk: bytes, asset_id: str) -> None:
        state = self._chain(chain)
        held = state.holdings.get(canonical.to_hex(pk), set())
        if asset_id not in held:
            raise InsufficientBalance(f"account does not hold asset {asset_id}")
        held.discard(asset_id)

    def give_asset(self, chain: ChainId, pk: bytes, asset_id: str) -> None:
        state = self._chain(chain)
        state.holdings.setdefault(canonical.to_hex(pk), set()).add(asset_id)

    # -- genesis and blocks ------------------------------------------------------

    def _seal_genesis(self, chain: ChainId) -> None:
        tx = Transaction.make(
            "genesis", {"chain": chain}, self.treasury, nonce=f"genesis-{chain}"
        )
        state = self._chain(chain)
        header = BlockHeader(
            chain=chain,
            height=0,
            prev=GENESIS_PREV,
            merkle_root=merkle_root([tx.tx_id]),
            timestamp=self.clock,
        )
        state.blocks.append(Block(header=header, txs=[tx]))

    def submit_tx(self, chain: ChainId, tx: Transaction) -> bytes:
        state = self._chain(chain)
        if not tx.verify():
            raise BadSignature("transaction signature does not verify under sender")
        sender = canonical.to_hex(tx.sender)
        if tx.kind == "transfer":
            amount = int(tx.body["amount"])
            if amount < 0:
                raise InsufficientBalance("negative transfer amount")
            if state.balances.get(sender, 0) < amount:
                raise InsufficientBalance(
                    f"sender holds {state.balances.get(sender, 0)} < {amount}"
                )
            dest = tx.body["to"]
            state.balances[sender] = state.balances.get(sender, 0) - amount
            state.balances[dest] = state.balances.get(dest, 0) + amount
        state.pending.append(tx)
        self.log_op(chain, "anchor" if tx.kind == "anchor" else tx.kind, tx_id=tx.tx_id)
        return tx.tx_id

    def seal_block(self, chain: ChainId) -> BlockHeader:
        state = self._chain(chain)
        if not state.pending:
            raise EmptyPool(f"no pending transactions on {chain}")
        self.clock += 1
        prev = state.blocks[-1].header.header_digest()
        header = BlockHeader(
            chain=chain,
            height=len(state.blocks),
            prev=prev,
            merkle_root=merkle_root([tx.tx_id for tx in state.pending]),
            timestamp=self.clock,
        )
        state.blocks.append(Block(header=header, txs=list(state.pending)))
        state.pending.clear()
        return header

    def advance_clock(self, ticks: int) -> int:
        if ticks < 1:
            raise ValueError("clock can only move forward by at least one tick")
        self.clock += ticks
        return self.clock

    def find_tx(self, chain: ChainId, tx_id: bytes) -> tuple[Block, int] | None:
        for block in self._chain(chain).blocks:
            for i, tx in enumerate(block.txs):
                if tx.tx_id == tx_id:
                    return block, i
        return None

    def header_at(self, chain: ChainId, height: int) -> BlockHeader:
        blocks = self._chain(chain).blocks
        if not 0 <= height < len(blocks):
            raise UnknownChain(f"{chain} has no header at height {height}")
        return blocks[height].header

    # -- light-client relay ---------------------------------------------------

    def relay_header(self, observer: ChainId, observed: ChainId, header: BlockHeader) -> bool:
        """Accept iff the header extends the observer's view by exactly one
        height with correct prev linkage. Rejection is a False return."""
        self._chain(observer)
        self._chain(observed)
        view = self.relayed.setdefault((observer, observed), [])
        if not view:
            ok = header.height == 0 and header.prev == GENESIS_PREV
        else:
            ok = (
                header.height == len(view)
                and header.prev == view[-1].header_digest()
            )
        ok = ok and header.chain == observed
        kind = "relay_header" if ok else "relay_reject"
        self.log_op(observer, kind, descriptor={"observed": observed, "height": header.height})
        if ok:
            view.append(header)
        return ok

    def relayed_header_at(self, observer: ChainId, observed: ChainId, height: int) -> BlockHeader | None:
        view = self.relayed.get((observer, observed), [])
        if 0 <= height < len(view):
            return view[height]
        return None

    def relay_chain(self, observer: ChainId, observed: ChainId) -> int:
        """Relay every not-yet-relayed header of `observed`; returns count accepted."""
        view = self.relayed.get((observer, observed), [])
        accepted = 0
        for block in self._chain(observed).blocks[len(view):]:
            if self.relay_header(observer, observed, block.header):
                accepted += 1
        return accepted

    # -- export and audits ------------------------------------------------------

    def op_log_csv(self) -> str:
        out = io.StringIO()
        out.write("tick,chain,op_kind,cost_units,tx_id\n")
        for rec in self.op_log:
            out.write(rec.csv_row() + "\n")
        return out.getvalue()

    def snapshot(self) -> dict:
        chains: dict[str, Any] = {}
        for label, state in self.chains.items():
            chains[label] = {
                "headers": [b.header.to_json() for b in state.blocks],
                "txCounts": [len(b.txs) for b in state.blocks],
                "pending": [tx.to_json() for tx in state.pending],
                "balances": dict(sorted(state.balances.items())),
                "holdings": {k: sorted(v) for k, v in sorted(state.holdings.items())},
                "contracts": {
                    cid: c.to_json() for cid, c in sorted(state.contracts.items())
                },
                "mintedValue": state.minted_value,
                "mintedAssets": sorted(state.minted_assets),
            }
        return {
            "clock": self.clock,
            "chains": chains,
            "relayed": {
                f"{obs}<-{src}": [h.header_digest().hex() for h in view]
                for (obs, src), view in sorted(self.relayed.items())
            },
            "didRegistry": {
                did: entry.to_json() for did, entry in sorted(self.did_registry.items())
            },
            "statusLists": {
                uri: sl.to_json() for uri, sl in sorted(self.status_lists.items())
            },
            "acceptance": {
                chain: [r.to_json() for r in recs]
                for chain, recs in sorted(self.acceptance_records.items())
            },
        }

    def world_digest(self) -> bytes:
        return digest(canonical.dumps_bytes(self.snapshot()))

    def check_header_chains(self) -> None:
        for label, state in self.chains.items():
            for k in range(1, len(state.blocks)):
                prev = state.blocks[k - 1].header
                cur = state.blocks[k].header
                if cur.prev != prev.header_digest() or cur.height != k:
                    raise InvariantViolation(f"broken header linkage on {label} at {k}")
            genesis = state.blocks[0].header
            if genesis.prev != GENESIS_PREV or genesis.height != 0:
                raise InvariantViolation(f"bad genesis on {label}")
            for block in state.blocks:
                want = merkle_root([tx.tx_id for tx in block.txs])
                if block.header.merkle_root != want:
                    raise InvariantViolation(
                        f"header root mismatch on {label} at {block.header.height}"
                    )

    def check_light_client_prefix(self) -> None:
        for (observer, observed), view in self.relayed.items():
            truth = [b.header for b in self._chain(observed).blocks]
            if len(view) > len(truth) or view != truth[: len(view)]:
                raise InvariantViolation(
                    f"relayed view {observer}<-{observed} is not a prefix of the chain"
                )

    def check_conservation(self) -> None:
        for label, state in self.chains.items():
            total = sum(state.balances.values())
            assets: list[str] = []
            for held in state.holdings.values():
                assets.extend(held)
            for contract in state.contracts.values():
                total += getattr(contract, "escrowed_value", 0)
                assets.extend(getattr(contract, "escrowed_assets", ()))
            if total != state.minted_value:
                raise InvariantViolation(
                    f"value not conserved on {label}: {total} != {state.minted_value}"
                )
            if sorted(assets) != sorted(state.minted_assets):
                raise InvariantViolation(f"asset multiset not conserved on {label}")

    def check_all(self) -> None:
        self.check_header_chains()
        self.check_light_client_prefix()
        self.check_conservation()
