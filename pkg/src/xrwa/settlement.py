"""Hash-timelock escrow and the two-chain settlement channel.

An HtlcLock escrows value or one asset behind a hash condition and a
timeout: release strictly before the timeout with the right preimage, or
refund at/after it. Escrow leaves a contract exactly once.

A Channel pairs two contracts: a funds leg (buyer's deposit) and an assets
leg (seller's asset set), usually on different chains. Signed off-chain
states carry a strictly increasing sequence number and describe the
cumulative intended allocation relative to the original deposits: `batch`
is everything the buyer should own so far and `net_payment` everything the
seller should have been paid so far. Locking installs the hash condition
with timeouts t1 > t2 (funds leg lives longer, giving the seller a reaction
window of t1 - t2 ticks once the preimage is public). A settlement executes
only the delta between the committed state and what previous settlements
already moved, then the channel re-enters Open with its sequence preserved,
so further updates and settlements need no reopening. A refund cancels the
lock without moving anything; the channel likewise continues.

All on-chain steps are logged with weights from the calibrated cost table;
state updates are purely off-chain and log nothing.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from . import canonical
from .costs import CostTable  # re-exported as part of this module's surface
from .errors import (
    BadSignature,
    BadTimeouts,
    ConservationViolation,
    Expired,
    InsufficientBalance,
    NotLocked,
    NotYetExpired,
    PastTimeout,
    StaleSeq,
    UnauthenticatedAsset,
    WrongPhase,
    WrongPreimage,
)
from .ledger import ChainId, World
from .primitives import KeyPair, digest, sign, verify_sig
from .xauth import has_acceptance

__all__ = [
    "CostTable",
    "HtlcLock",
    "ChannelState",
    "ChannelLeg",
    "Channel",
    "CostReport",
    "htlc_lock",
    "htlc_unlock",
    "htlc_refund",
    "refund_eligible",
    "chan_open",
    "make_state",
    "sign_state",
    "chan_update",
    "chan_lock",
    "chan_unlock",
    "chan_refund",
    "chan_close",
    "reveal_on_assets_leg",
    "redeem_on_funds_leg",
    "refund_leg",
    "cost_report",
]


# -------------------------------------------------------------------- htlc --

@dataclass
class HtlcLock:
    contract_id: str
    chain: ChainId
    depositor: bytes
    beneficiary: bytes
    escrow: dict  # {"value": int} or {"asset": str}
    hash_cond: bytes
    timeout: int
    state: str = "Locked"

    @property
    def escrowed_value(self) -> int:
        return self.escrow.get("value", 0) if self.state == "Locked" else 0

    @property
    def escrowed_assets(self) -> tuple[str, ...]:
        if self.state == "Locked" and "asset" in self.escrow:
            return (self.escrow["asset"],)
        return ()

    def to_json(self) -> dict:
        return {
            "kind": "htlc",
            "chain": self.chain,
            "depositor": canonical.to_hex(self.depositor),
            "beneficiary": canonical.to_hex(self.beneficiary),
            "escrow": self.escrow,
            "hashCond": canonical.to_hex(self.hash_cond),
            "timeout": self.timeout,
            "state": self.state,
        }


def _take_escrow(world: World, chain: ChainId, owner: bytes, escrow: dict) -> None:
    if "value" in escrow:
        if escrow["value"] < 0:
            raise InsufficientBalance("escrow value must be non-negative")
        world.debit(chain, owner, escrow["value"])
    elif "asset" in escrow:
        world.take_asset(chain, owner, escrow["asset"])
    else:
        raise InsufficientBalance("escrow must name a value or an asset")


def _release_escrow(world: World, chain: ChainId, receiver: bytes, escrow: dict) -> None:
    if "value" in escrow:
        world.credit(chain, receiver, escrow["value"])
    else:
        world.give_asset(chain, receiver, escrow["asset"])


def htlc_lock(
    world: World,
    chain: ChainId,
    depositor: bytes,
    beneficiary: bytes,
    escrow: dict,
    hash_cond: bytes,
    timeout: int,
) -> HtlcLock:
    if timeout <= world.clock:
        raise PastTimeout(f"timeout {timeout} is not after clock {world.clock}")
    _take_escrow(world, chain, depositor, escrow)
    contract_id = "htlc-" + digest(
        canonical.dumps_bytes(
            {
                "chain": chain,
                "depositor": canonical.to_hex(depositor),
                "hashCond": canonical.to_hex(hash_cond),
                "n": len(world.chains[chain].contracts),
            }
        )
    ).hex()[:16]
    lock = HtlcLock(
        contract_id=contract_id,
        chain=chain,
        depositor=depositor,
        beneficiary=beneficiary,
        escrow=dict(escrow),
        hash_cond=hash_cond,
        timeout=timeout,
    )
    world.chains[chain].contracts[contract_id] = lock
    world.log_op(chain, "htlc_lock", descriptor={"contract": contract_id})
    return lock


def htlc_unlock(world: World, lock: HtlcLock, preimage: bytes, at: Optional[int] = None) -> dict:
    at = world.clock if at is None else at
    if lock.state != "Locked":
        raise NotLocked(f"contract is {lock.state}")
    if digest(preimage) != lock.hash_cond:
        raise WrongPreimage("preimage does not hash to the lock condition")
    if at >= lock.timeout:
        raise Expired(f"unlock at {at} not strictly before timeout {lock.timeout}")
    lock.state = "Unlocked"
    _release_escrow(world, lock.chain, lock.beneficiary, lock.escrow)
    world.log_op(lock.chain, "htlc_unlock", descriptor={"contract": lock.contract_id})
    return {"to": canonical.to_hex(lock.beneficiary), "escrow": lock.escrow, "at": at}


def htlc_refund(world: World, lock: HtlcLock, at: Optional[int] = None) -> dict:
    at = world.clock if at is None else at
    if lock.state != "Locked":
        raise NotLocked(f"contract is {lock.state}")
    if at < lock.timeout:
        raise NotYetExpired(f"refund at {at} before timeout {lock.timeout}")
    lock.state = "Refunded"
    _release_escrow(world, lock.chain, lock.depositor, lock.escrow)
    world.log_op(lock.chain, "htlc_refund", descriptor={"contract": lock.contract_id})
    return {"to": canonical.to_hex(lock.depositor), "escrow": lock.escrow, "at": at}


def refund_eligible(lock: HtlcLock, clock: int) -> bool:
    return lock.state == "Locked" and clock >= lock.timeout


# ----------------------------------------------------------------- channel --

@dataclass(frozen=True)
class ChannelState:
    """Signed off-chain state; allocation is cumulative from channel open."""

    channel_id: str
    seq: int
    balances: dict[str, int]
    holdings: dict[str, list[str]]
    batch: list[str]
    net_payment: int
    sig_a: bytes = b""
    sig_b: bytes = b""

    def body_json(self) -> dict:
        return {
            "channelId": self.channel_id,
            "seq": self.seq,
            "balances": self.balances,
            "holdings": self.holdings,
            "batch": self.batch,
            "netPayment": self.net_payment,
        }

    def canonical_bytes(self) -> bytes:
        return canonical.dumps_bytes(self.body_json())

    def state_digest(self) -> bytes:
        return digest(self.canonical_bytes())

    def to_json(self) -> dict:
        out = self.body_json()
        out["sigA"] = canonical.to_hex(self.sig_a)
        out["sigB"] = canonical.to_hex(self.sig_b)
        return out


@dataclass
class ChannelLeg:
    contract_id: str
    chain: ChainId
    escrowed_value: int = 0
    escrowed_assets: set[str] = field(default_factory=set)
    committed_digest: Optional[bytes] = None
    hash_cond: Optional[bytes] = None
    timeout: Optional[int] = None
    lock_state: str = "Idle"  # Idle | Locked | Unlocked | Refunded

    def to_json(self) -> dict:
        return {
            "kind": "channel-leg",
            "chain": self.chain,
            "escrowedValue": self.escrowed_value,
            "escrowedAssets": sorted(self.escrowed_assets),
            "committed": canonical.to_hex(self.committed_digest) if self.committed_digest else None,
            "hashCond": canonical.to_hex(self.hash_cond) if self.hash_cond else None,
            "timeout": self.timeout,
            "lockState": self.lock_state,
        }


@dataclass
class Channel:
    channel_id: str
    buyer_pk: bytes
    seller_pk: bytes
    chain_funds: ChainId
    chain_assets: ChainId
    leg_funds: ChannelLeg
    leg_assets: ChannelLeg
    deposit_value: int
    deposit_assets: tuple[str, ...]
    latest: ChannelState
    settled_assets: set[str] = field(default_factory=set)
    settled_payment: int = 0
    t1: Optional[int] = None
    t2: Optional[int] = None
    hash_cond: Optional[bytes] = None
    committed_seq: Optional[int] = None
    revealed_preimage: Optional[bytes] = None
    phase: str = "Open"  # Open | Locked | Closed

    @property
    def buyer_hex(self) -> str:
        return canonical.to_hex(self.buyer_pk)

    @property
    def seller_hex(self) -> str:
        return canonical.to_hex(self.seller_pk)


def sign_state(party: KeyPair, state: ChannelState) -> bytes:
    return sign(party.sk, state.canonical_bytes())


def make_state(
    channel: Channel,
    batch: list[str],
    net_payment: int,
    buyer: KeyPair,
    seller: KeyPair,
    seq: Optional[int] = None,
) -> ChannelState:
    """Construct and co-sign the next cumulative state."""
    seq = channel.latest.seq + 1 if seq is None else seq
    batch_sorted = sorted(batch)
    remaining = sorted(set(channel.deposit_assets) - set(batch_sorted))
    state = ChannelState(
        channel_id=channel.channel_id,
        seq=seq,
        balances={
            channel.buyer_hex: channel.deposit_value - net_payment,
            channel.seller_hex: net_payment,
        },
        holdings={channel.buyer_hex: batch_sorted, channel.seller_hex: remaining},
        batch=batch_sorted,
        net_payment=net_payment,
    )
    return dataclasses.replace(
        state, sig_a=sign_state(buyer, state), sig_b=sign_state(seller, state)
    )


def chan_open(
    world: World,
    buyer: KeyPair,
    seller: KeyPair,
    deposit_value: int,
    deposit_assets: list[str],
    chain_funds: ChainId = "C1",
    chain_assets: ChainId = "C2",
) -> Channel:
    """Escrow both deposits and open the channel with a co-signed state 0.

    Every deposited asset must be recognized on the asset chain: either
    authenticated cross-chain (an acceptance record exists) or locally
    issued there.
    """
    if deposit_value < 0:
        raise InsufficientBalance("deposit value must be non-negative")
    for asset in deposit_assets:
        if not has_acceptance(world, chain_assets, asset) and world.asset_origins.get(asset) != chain_assets:
            raise UnauthenticatedAsset(f"{asset} not authenticated or issued on {chain_assets}")

    channel_id = "chan-" + digest(
        canonical.dumps_bytes(
            {
                "buyer": canonical.to_hex(buyer.pk),
                "seller": canonical.to_hex(seller.pk),
                "assets": sorted(deposit_assets),
                "value": deposit_value,
                "nonce": world.next_nonce(),
            }
        )
    ).hex()[:16]

    world.debit(chain_funds, buyer.pk, deposit_value)
    for asset in deposit_assets:
        world.take_asset(chain_assets, seller.pk, asset)

    leg_funds = ChannelLeg(
        contract_id=channel_id + "-funds", chain=chain_funds, escrowed_value=deposit_value
    )
    leg_assets = ChannelLeg(
        contract_id=channel_id + "-assets",
        chain=chain_assets,
        escrowed_assets=set(deposit_assets),
    )
    world.chains[chain_funds].contracts[leg_funds.contract_id] = leg_funds
    world.chains[chain_assets].contracts[leg_assets.contract_id] = leg_assets

    channel = Channel(
        channel_id=channel_id,
        buyer_pk=buyer.pk,
        seller_pk=seller.pk,
        chain_funds=chain_funds,
        chain_assets=chain_assets,
        leg_funds=leg_funds,
        leg_assets=leg_assets,
        deposit_value=deposit_value,
        deposit_assets=tuple(sorted(deposit_assets)),
        latest=ChannelState(channel_id=channel_id, seq=0, balances={}, holdings={}, batch=[], net_payment=0),
    )
    channel.latest = make_state(channel, batch=[], net_payment=0, buyer=buyer, seller=seller, seq=0)
    world.log_op(chain_funds, "chan_open", descriptor={"channel": channel_id})
    world.log_op(chain_assets, "chan_open", descriptor={"channel": channel_id})
    return channel


def _check_conserves(channel: Channel, state: ChannelState) -> None:
    parties = {channel.buyer_hex, channel.seller_hex}
    if set(state.balances) != parties or set(state.holdings) != parties:
        raise ConservationViolation("state must allocate to exactly the two parties")
    if any(v < 0 for v in state.balances.values()):
        raise ConservationViolation("negative balance in proposed state")
    if sum(state.balances.values()) != channel.deposit_value:
        raise ConservationViolation("proposed balances do not sum to the deposit")
    allocated = state.holdings[channel.buyer_hex] + state.holdings[channel.seller_hex]
    if sorted(allocated) != sorted(channel.deposit_assets):
        raise ConservationViolation("proposed holdings do not partition the deposit assets")
    if sorted(state.batch) != sorted(state.holdings[channel.buyer_hex]):
        raise ConservationViolation("batch must equal the buyer's proposed holdings")
    if state.net_payment != state.balances[channel.seller_hex]:
        raise ConservationViolation("net payment must equal the seller's proposed balance")
    if not set(state.batch) >= channel.settled_assets:
        raise ConservationViolation("proposed batch would un-settle delivered assets")
    if state.net_payment < channel.settled_payment:
        raise ConservationViolation("proposed payment below what is already settled")


def chan_update(channel: Channel, proposed: ChannelState) -> Channel:
    """Apply a co-signed off-chain state; zero on-chain operations."""
    if channel.phase != "Open":
        raise WrongPhase(f"channel is {channel.phase}")
    if proposed.channel_id != channel.channel_id:
        raise BadSignature("state names a different channel")
    if proposed.seq != channel.latest.seq + 1:
        raise StaleSeq(f"expected seq {channel.latest.seq + 1}, got {proposed.seq}")
    body = proposed.canonical_bytes()
    if not verify_sig(channel.buyer_pk, body, proposed.sig_a):
        raise BadSignature("buyer signature invalid")
    if not verify_sig(channel.seller_pk, body, proposed.sig_b):
        raise BadSignature("seller signature invalid")
    _check_conserves(channel, proposed)
    channel.latest = proposed
    return channel


def chan_lock(world: World, channel: Channel, hash_cond: bytes, t1: int, t2: int) -> Channel:
    """Commit the latest state on both contracts under hash-locked conditions."""
    if channel.phase != "Open":
        raise WrongPhase(f"channel is {channel.phase}")
    if not (t1 > t2 > world.clock):
        raise BadTimeouts(f"need t1 > t2 > clock, got t1={t1} t2={t2} clock={world.clock}")
    if not channel.latest.sig_a or not channel.latest.sig_b:
        raise BadSignature("latest state is not co-signed")
    committed = channel.latest.state_digest()
    for leg, timeout in ((channel.leg_funds, t1), (channel.leg_assets, t2)):
        leg.committed_digest = committed
        leg.hash_cond = hash_cond
        leg.timeout = timeout
        leg.lock_state = "Locked"
    channel.hash_cond = hash_cond
    channel.t1, channel.t2 = t1, t2
    channel.committed_seq = channel.latest.seq
    channel.phase = "Locked"
    world.log_op(channel.chain_funds, "chan_lock", descriptor={"channel": channel.channel_id})
    world.log_op(channel.chain_assets, "chan_lock", descriptor={"channel": channel.channel_id})
    return channel


def _delta_assets(channel: Channel) -> list[str]:
    return sorted(set(channel.latest.batch) - channel.settled_assets)


def _delta_payment(channel: Channel) -> int:
    return channel.latest.net_payment - channel.settled_payment


def reveal_on_assets_leg(world: World, channel: Channel, preimage: bytes, at: Optional[int] = None) -> None:
    """Buyer reveals the preimage on the asset contract, taking the committed
    batch delta. The preimage becomes public knowledge on-chain."""
    at = world.clock if at is None else at
    leg = channel.leg_assets
    if channel.phase != "Locked" or leg.lock_state != "Locked":
        raise WrongPhase("asset leg is not locked")
    if digest(preimage) != channel.hash_cond:
        raise WrongPreimage("preimage does not hash to the lock condition")
    if at >= channel.t2:
        raise Expired(f"reveal at {at} not strictly before t2={channel.t2}")
    for asset in _delta_assets(channel):
        leg.escrowed_assets.discard(asset)
        world.give_asset(channel.chain_assets, channel.buyer_pk, asset)
    leg.lock_state = "Unlocked"
    channel.revealed_preimage = preimage
    world.log_op(channel.chain_assets, "chan_unlock", descriptor={"channel": channel.channel_id, "leg": "assets"})
    _maybe_reopen(channel)


def redeem_on_funds_leg(world: World, channel: Channel, preimage: bytes, at: Optional[int] = None) -> None:
    """Seller redeems the aggregated payment on the funds contract with the
    now-public preimage; allowed strictly before t1."""
    at = world.clock if at is None else at
    leg = channel.leg_funds
    if leg.lock_state != "Locked":
        raise WrongPhase("funds leg is not locked")
    if digest(preimage) != channel.hash_cond:
        raise WrongPreimage("preimage does not hash to the lock condition")
    if at >= channel.t1:
        raise Expired(f"redeem at {at} not strictly before t1={channel.t1}")
    delta = _delta_payment(channel)
    leg.escrowed_value -= delta
    world.credit(channel.chain_funds, channel.seller_pk, delta)
    leg.lock_state = "Unlocked"
    world.log_op(channel.chain_funds, "chan_unlock", descriptor={"channel": channel.channel_id, "leg": "funds"})
    _maybe_reopen(channel)


def refund_leg(world: World, channel: Channel, leg_name: str, at: Optional[int] = None) -> None:
    """Cancel one leg's lock at/after its timeout; escrow stays in the
    channel and the committed assignment is reverted."""
    at = world.clock if at is None else at
    leg = channel.leg_assets if leg_name == "assets" else channel.leg_funds
    if channel.phase != "Locked" or leg.lock_state != "Locked":
        raise WrongPhase(f"{leg_name} leg is not locked")
    if at < leg.timeout:
        raise NotYetExpired(f"refund at {at} before timeout {leg.timeout}")
    leg.lock_state = "Refunded"
    world.log_op(leg.chain, "chan_refund", descriptor={"channel": channel.channel_id, "leg": leg_name})
    _maybe_reopen(channel)


def _maybe_reopen(channel: Channel) -> None:
    """Once both legs resolved, fold the outcome into the cumulative settled
    totals and re-enter Open with the sequence preserved."""
    states = (channel.leg_funds.lock_state, channel.leg_assets.lock_state)
    if "Locked" in states or channel.phase != "Locked":
        return
    if channel.leg_assets.lock_state == "Unlocked":
        channel.settled_assets = set(channel.latest.batch)
    if channel.leg_funds.lock_state == "Unlocked":
        channel.settled_payment = channel.latest.net_payment
    for leg in (channel.leg_funds, channel.leg_assets):
        leg.committed_digest = None
        leg.hash_cond = None
        leg.timeout = None
        leg.lock_state = "Idle"
    channel.hash_cond = None
    channel.t1 = channel.t2 = None
    channel.committed_seq = None
    channel.revealed_preimage = None
    channel.phase = "Open"


def chan_unlock(world: World, channel: Channel, preimage: bytes, at: Optional[int] = None) -> Channel:
    """Cooperative settlement: reveal on the asset chain, then redeem the
    payment on the funds chain, both at the same tick."""
    at = world.clock if at is None else at
    if channel.phase != "Locked":
        raise WrongPhase(f"channel is {channel.phase}")
    reveal_on_assets_leg(world, channel, preimage, at)
    redeem_on_funds_leg(world, channel, preimage, at)
    return channel


def chan_refund(world: World, channel: Channel, at: Optional[int] = None, leg: Optional[str] = None) -> Channel:
    """Refund one leg (leg="assets" or "funds") or, with no leg named, both."""
    at = world.clock if at is None else at
    if channel.phase != "Locked":
        raise WrongPhase(f"channel is {channel.phase}")
    legs = [leg] if leg else ["assets", "funds"]
    for name in legs:
        refund_leg(world, channel, name, at)
    return channel


def chan_close(world: World, channel: Channel) -> dict:
    """Cooperative close: execute the latest co-signed state's outstanding
    delta, then return residual deposits to their original owners."""
    if channel.phase != "Open":
        raise WrongPhase(f"channel is {channel.phase}")
    assets_out = _delta_assets(channel)
    payment_out = _delta_payment(channel)
    for asset in assets_out:
        channel.leg_assets.escrowed_assets.discard(asset)
        world.give_asset(channel.chain_assets, channel.buyer_pk, asset)
    channel.leg_funds.escrowed_value -= payment_out
    world.credit(channel.chain_funds, channel.seller_pk, payment_out)

    residual_assets = sorted(channel.leg_assets.escrowed_assets)
    for asset in residual_assets:
        channel.leg_assets.escrowed_assets.discard(asset)
        world.give_asset(channel.chain_assets, channel.seller_pk, asset)
    residual_value = channel.leg_funds.escrowed_value
    channel.leg_funds.escrowed_value = 0
    world.credit(channel.chain_funds, channel.buyer_pk, residual_value)

    channel.phase = "Closed"
    world.log_op(channel.chain_funds, "chan_close", descriptor={"channel": channel.channel_id})
    world.log_op(channel.chain_assets, "chan_close", descriptor={"channel": channel.channel_id})
    return {
        "buyerAssets": sorted(set(channel.latest.batch) | set(assets_out)),
        "sellerPayment": channel.settled_payment + payment_out,
        "buyerResidualValue": residual_value,
        "sellerResidualAssets": residual_assets,
    }


# ------------------------------------------------------------- cost report --

HTLC_KINDS = ("htlc_lock", "htlc_unlock", "htlc_refund")
CHANNEL_KINDS = ("chan_open", "chan_lock", "chan_unlock", "chan_refund", "chan_close")


@dataclass(frozen=True)
class CostReport:
    scenario: str
    htlc_total: float
    channel_total: float
    by_kind: dict[str, float]
    counts: dict[str, int]

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "htlcTotal": self.htlc_total,
            "channelTotal": self.channel_total,
            "byKind": dict(sorted(self.by_kind.items())),
            "counts": dict(sorted(self.counts.items())),
        }


def cost_report(world: World, scenario: str = "") -> CostReport:
    """Per-protocol cost totals summed from the actual op log."""
    by_kind: dict[str, float] = {}
    counts: dict[str, int] = {}
    for rec in world.op_log:
        by_kind[rec.op_kind] = by_kind.get(rec.op_kind, 0) + rec.cost_units
        counts[rec.op_kind] = counts.get(rec.op_kind, 0) + 1
    return CostReport(
        scenario=scenario,
        htlc_total=sum(by_kind.get(k, 0) for k in HTLC_KINDS),
        channel_total=sum(by_kind.get(k, 0) for k in CHANNEL_KINDS),
        by_kind=by_kind,
        counts=counts,
    )
