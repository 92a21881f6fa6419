import dataclasses
import random

import pytest

from xrwa import settlement
from xrwa.atomicity import explore_schedules, fuzz_schedules, run_schedule, Schedule
from xrwa.costs import CostTable
from xrwa.errors import (
    BadSignature,
    BadTimeouts,
    ConservationViolation,
    CostTableError,
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
from xrwa.ledger import World, WorldConfig
from xrwa.primitives import digest, keygen
from xrwa.settlement import (
    chan_close,
    chan_lock,
    chan_open,
    chan_refund,
    chan_unlock,
    chan_update,
    cost_report,
    htlc_lock,
    htlc_refund,
    htlc_unlock,
    make_state,
    refund_eligible,
    sign_state,
)

ALICE = keygen(digest(b"settle-alice"))
BOB = keygen(digest(b"settle-bob"))
RHO = digest(b"settle-preimage")
H_RHO = digest(RHO)


@pytest.fixture
def world():
    w = World(WorldConfig(seed=13))
    w.mint("C1", ALICE.pk, 1_000)
    w.mint("C2", BOB.pk, 500)
    w.mint_asset("C2", BOB.pk, "did:xrwa:asset-x")
    w.mint_asset("C2", BOB.pk, "did:xrwa:asset-y")
    w.mint_asset("C2", BOB.pk, "did:xrwa:asset-z")
    return w


# ------------------------------------------------------------------ htlc ----

def test_htlc_lock_escrows_value(world):
    lock = htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 300}, H_RHO, timeout=5)
    assert world.balance("C1", ALICE.pk) == 700
    assert lock.escrowed_value == 300
    world.check_conservation()


def test_htlc_lock_timeout_must_be_future(world):
    with pytest.raises(PastTimeout):
        htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 1}, H_RHO, timeout=world.clock)


def test_htlc_lock_requires_funds(world):
    with pytest.raises(InsufficientBalance):
        htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 10_000}, H_RHO, timeout=5)


def test_htlc_unlock_correct_preimage_before_timeout(world):
    lock = htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 300}, H_RHO, timeout=5)
    htlc_unlock(world, lock, RHO, at=3)
    assert lock.state == "Unlocked"
    assert world.balance("C1", BOB.pk) == 300
    world.check_conservation()


def test_htlc_unlock_at_timeout_expired(world):
    lock = htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 300}, H_RHO, timeout=5)
    with pytest.raises(Expired):
        htlc_unlock(world, lock, RHO, at=5)


def test_htlc_unlock_wrong_preimage(world):
    lock = htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 300}, H_RHO, timeout=5)
    with pytest.raises(WrongPreimage):
        htlc_unlock(world, lock, b"nope", at=1)
    assert lock.state == "Locked"


def test_htlc_refund_boundaries(world):
    lock = htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 300}, H_RHO, timeout=5)
    with pytest.raises(NotYetExpired):
        htlc_refund(world, lock, at=4)
    htlc_refund(world, lock, at=5)
    assert lock.state == "Refunded"
    assert world.balance("C1", ALICE.pk) == 1_000
    with pytest.raises(NotLocked):
        htlc_unlock(world, lock, RHO, at=1)


def test_htlc_asset_escrow_roundtrip(world):
    lock = htlc_lock(world, "C2", BOB.pk, ALICE.pk, {"asset": "did:xrwa:asset-x"}, H_RHO, timeout=7)
    assert "did:xrwa:asset-x" not in world.assets_of("C2", BOB.pk)
    htlc_unlock(world, lock, RHO, at=2)
    assert "did:xrwa:asset-x" in world.assets_of("C2", ALICE.pk)
    world.check_conservation()


def test_symmetric_swap_setup_with_staggered_timeouts(world):
    # classic atomic-swap shape: funds on C1 under t1, asset on C2 under t2 < t1
    l1 = htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 400}, H_RHO, timeout=10)
    l2 = htlc_lock(world, "C2", BOB.pk, ALICE.pk, {"asset": "did:xrwa:asset-y"}, H_RHO, timeout=6)
    world.advance_clock(7)  # past t2, before t1
    assert refund_eligible(l2, world.clock)
    assert not refund_eligible(l1, world.clock)
    world.advance_clock(5)
    assert refund_eligible(l1, world.clock)


# --------------------------------------------------------------- channel ----

def open_channel(world, assets=("did:xrwa:asset-x", "did:xrwa:asset-y")):
    return chan_open(world, ALICE, BOB, 600, list(assets))


def test_chan_open_escrows_both_sides(world):
    ch = open_channel(world)
    assert world.balance("C1", ALICE.pk) == 400
    assert world.assets_of("C2", BOB.pk) == {"did:xrwa:asset-z"}
    assert ch.phase == "Open"
    assert ch.hash_cond is None  # no hash-locked condition at open
    assert len([r for r in world.op_log if r.op_kind == "chan_open"]) == 2
    world.check_conservation()


def test_chan_open_zero_value_one_sided(world):
    ch = chan_open(world, ALICE, BOB, 0, ["did:xrwa:asset-x"])
    assert ch.deposit_value == 0


def test_chan_open_unauthenticated_asset_rejected(world):
    world.mint_asset("C1", BOB.pk, "did:xrwa:foreign")  # origin C1, not C2
    world.give_asset("C2", BOB.pk, "did:xrwa:foreign")
    world.chains["C2"].minted_assets.add("did:xrwa:foreign")
    with pytest.raises(UnauthenticatedAsset):
        chan_open(world, ALICE, BOB, 10, ["did:xrwa:foreign"])


def test_hundred_updates_cost_nothing_onchain(world):
    ch = open_channel(world)
    before = len(world.op_log)
    for i in range(100):
        state = make_state(ch, batch=["did:xrwa:asset-x"], net_payment=i + 1, buyer=ALICE, seller=BOB)
        chan_update(ch, state)
    assert len(world.op_log) == before
    assert ch.latest.seq == 100


def test_stale_seq_rejected(world):
    ch = open_channel(world)
    state = make_state(ch, batch=[], net_payment=1, buyer=ALICE, seller=BOB)
    chan_update(ch, state)
    stale = make_state(ch, batch=[], net_payment=2, buyer=ALICE, seller=BOB, seq=1)
    with pytest.raises(StaleSeq):
        chan_update(ch, stale)


def test_update_foreign_asset_conservation_violation(world):
    ch = open_channel(world)
    bad = make_state(ch, batch=["did:xrwa:asset-z"], net_payment=1, buyer=ALICE, seller=BOB)
    with pytest.raises(ConservationViolation):
        chan_update(ch, bad)


def test_update_bad_signature_rejected(world):
    ch = open_channel(world)
    state = make_state(ch, batch=[], net_payment=5, buyer=ALICE, seller=BOB)
    forged = dataclasses.replace(state, sig_b=sign_state(ALICE, state))
    with pytest.raises(BadSignature):
        chan_update(ch, forged)


def test_update_conservation_fuzz_against_oracle(world):
    # randomized proposals; a hand-rolled conservation oracle decides validity
    ch = open_channel(world)
    rng = random.Random(0x5E)
    assets = list(ch.deposit_assets)
    accepted = rejected = 0
    for _ in range(120):
        batch = sorted(rng.sample(assets + ["did:xrwa:rogue"], rng.randrange(0, 3)))
        net = rng.randrange(-50, 700)
        balances = {ch.buyer_hex: ch.deposit_value - net, ch.seller_hex: net}
        holdings = {
            ch.buyer_hex: batch,
            ch.seller_hex: sorted(set(assets) - set(batch)),
        }
        state = settlement.ChannelState(
            channel_id=ch.channel_id,
            seq=ch.latest.seq + 1,
            balances=balances,
            holdings=holdings,
            batch=batch,
            net_payment=net,
        )
        state = dataclasses.replace(
            state, sig_a=sign_state(ALICE, state), sig_b=sign_state(BOB, state)
        )
        oracle_ok = (
            0 <= net <= ch.deposit_value
            and set(batch) <= set(assets)
            and sorted(holdings[ch.buyer_hex] + holdings[ch.seller_hex]) == sorted(assets)
        )
        try:
            chan_update(ch, state)
            accepted += 1
            assert oracle_ok
        except ConservationViolation:
            rejected += 1
            assert not oracle_ok
    assert accepted > 10 and rejected > 10


def locked_channel(world, net=250, batch=("did:xrwa:asset-x",), t1=8, t2=5):
    ch = open_channel(world)
    state = make_state(ch, batch=list(batch), net_payment=net, buyer=ALICE, seller=BOB)
    chan_update(ch, state)
    chan_lock(world, ch, H_RHO, t1, t2)
    return ch


def test_lock_requires_strict_timeout_order(world):
    ch = open_channel(world)
    state = make_state(ch, batch=[], net_payment=1, buyer=ALICE, seller=BOB)
    chan_update(ch, state)
    with pytest.raises(BadTimeouts):
        chan_lock(world, ch, H_RHO, 5, 5)
    with pytest.raises(BadTimeouts):
        chan_lock(world, ch, H_RHO, 3, 5)


def test_lock_freezes_updates(world):
    ch = locked_channel(world)
    assert ch.phase == "Locked"
    late = make_state(ch, batch=[], net_payment=9, buyer=ALICE, seller=BOB)
    with pytest.raises(WrongPhase):
        chan_update(ch, late)


def test_lock_commits_same_digest_on_both_legs(world):
    ch = locked_channel(world)
    assert ch.leg_funds.committed_digest == ch.leg_assets.committed_digest
    assert ch.leg_funds.committed_digest == ch.latest.state_digest()
    assert ch.committed_seq == ch.latest.seq


def test_partial_settlement_without_closure(world):
    ch = chan_open(world, ALICE, BOB, 600, ["did:xrwa:asset-x", "did:xrwa:asset-y", "did:xrwa:asset-z"])
    s1 = make_state(ch, batch=["did:xrwa:asset-x", "did:xrwa:asset-y"], net_payment=200, buyer=ALICE, seller=BOB)
    chan_update(ch, s1)
    chan_lock(world, ch, H_RHO, 8, 5)
    chan_unlock(world, ch, RHO, at=2)
    # buyer holds the settled batch on the asset chain
    assert world.assets_of("C2", ALICE.pk) == {"did:xrwa:asset-x", "did:xrwa:asset-y"}
    assert world.balance("C1", BOB.pk) == 200
    # channel re-enters Open with seq preserved and the residual negotiable
    assert ch.phase == "Open"
    assert ch.latest.seq == 1
    s2 = make_state(
        ch,
        batch=["did:xrwa:asset-x", "did:xrwa:asset-y", "did:xrwa:asset-z"],
        net_payment=290,
        buyer=ALICE,
        seller=BOB,
    )
    chan_update(ch, s2)
    rho2 = digest(b"second-preimage")
    chan_lock(world, ch, digest(rho2), 12, 10)
    chan_unlock(world, ch, rho2, at=9)
    assert world.assets_of("C2", ALICE.pk) == {"did:xrwa:asset-x", "did:xrwa:asset-y", "did:xrwa:asset-z"}
    assert world.balance("C1", BOB.pk) == 290
    world.check_conservation()


def test_unlock_after_t2_expired(world):
    ch = locked_channel(world, t1=8, t2=5)
    with pytest.raises(Expired):
        chan_unlock(world, ch, RHO, at=5)
    chan_refund(world, ch, at=8)
    assert ch.phase == "Open"


def test_second_unlock_same_preimage_wrong_phase(world):
    ch = locked_channel(world)
    chan_unlock(world, ch, RHO, at=1)
    with pytest.raises(WrongPhase):
        chan_unlock(world, ch, RHO, at=1)


def test_unlock_wrong_preimage(world):
    ch = locked_channel(world)
    with pytest.raises(WrongPreimage):
        chan_unlock(world, ch, b"guess", at=1)


def test_refund_c2_at_t2_then_c1_before_t1_rejected(world):
    ch = locked_channel(world, t1=8, t2=5)
    chan_refund(world, ch, at=5, leg="assets")
    with pytest.raises(NotYetExpired):
        chan_refund(world, ch, at=5, leg="funds")
    chan_refund(world, ch, at=8, leg="funds")
    assert ch.phase == "Open"


def test_refund_restores_pre_lock_assignment(world):
    ch = locked_channel(world, net=250, batch=("did:xrwa:asset-x",), t1=8, t2=5)
    holdings_before = {
        "buyer": world.assets_of("C2", ALICE.pk),
        "seller": world.assets_of("C2", BOB.pk),
        "escrow": set(ch.leg_assets.escrowed_assets),
    }
    chan_refund(world, ch, at=8)
    assert world.assets_of("C2", ALICE.pk) == holdings_before["buyer"]
    assert world.assets_of("C2", BOB.pk) == holdings_before["seller"]
    assert set(ch.leg_assets.escrowed_assets) == holdings_before["escrow"]
    assert ch.settled_payment == 0 and not ch.settled_assets
    world.check_conservation()


def test_refund_then_three_more_update_rounds(world):
    ch = locked_channel(world, t1=8, t2=5)
    chan_refund(world, ch, at=8)
    for i in range(3):
        state = make_state(ch, batch=["did:xrwa:asset-y"], net_payment=100 + i, buyer=ALICE, seller=BOB)
        chan_update(ch, state)
    assert ch.latest.seq == 4


def test_close_immediately_after_open_returns_deposits(world):
    ch = open_channel(world)
    chan_close(world, ch)
    assert world.balance("C1", ALICE.pk) == 1_000
    assert world.assets_of("C2", BOB.pk) == {"did:xrwa:asset-x", "did:xrwa:asset-y", "did:xrwa:asset-z"}
    assert ch.phase == "Closed"
    world.check_conservation()


def test_close_while_locked_rejected(world):
    ch = locked_channel(world)
    with pytest.raises(WrongPhase):
        chan_close(world, ch)


def test_update_after_close_rejected(world):
    ch = open_channel(world)
    chan_close(world, ch)
    state = make_state(ch, batch=[], net_payment=1, buyer=ALICE, seller=BOB)
    with pytest.raises(WrongPhase):
        chan_update(ch, state)


def test_close_honors_latest_state(world):
    ch = open_channel(world)
    state = make_state(ch, batch=["did:xrwa:asset-x"], net_payment=150, buyer=ALICE, seller=BOB)
    chan_update(ch, state)
    summary = chan_close(world, ch)
    assert world.balance("C1", BOB.pk) == 150
    assert world.assets_of("C2", ALICE.pk) == {"did:xrwa:asset-x"}
    assert summary["sellerPayment"] == 150
    world.check_conservation()


def test_single_release_audit(world):
    # every escrow is released to exactly one destination exactly once
    ch = locked_channel(world, net=100, batch=("did:xrwa:asset-x",))
    chan_unlock(world, ch, RHO, at=1)
    chan_close(world, ch)
    unlock_ops = [r for r in world.op_log if r.op_kind == "chan_unlock"]
    close_ops = [r for r in world.op_log if r.op_kind == "chan_close"]
    assert len(unlock_ops) == 2 and len(close_ops) == 2
    world.check_conservation()
    total = world.balance("C1", ALICE.pk) + world.balance("C1", BOB.pk)
    assert total == 1_000


def test_offchain_zero_cost_1_vs_1000_updates():
    logs = []
    for n_updates in (1, 1000):
        w = World(WorldConfig(seed=21))
        w.mint("C1", ALICE.pk, 1_000)
        w.mint_asset("C2", BOB.pk, "did:xrwa:asset-x")
        ch = chan_open(w, ALICE, BOB, 600, ["did:xrwa:asset-x"])
        for i in range(n_updates):
            chan_update(ch, make_state(ch, batch=[], net_payment=(i % 7), buyer=ALICE, seller=BOB))
        chan_lock(w, ch, H_RHO, 8, 5)
        chan_unlock(w, ch, RHO, at=1)
        logs.append(w.op_log_csv())
    assert logs[0] == logs[1]


# ------------------------------------------------------------- cost table ----

def test_default_cost_table_calibration():
    table = CostTable()
    w = table.weights
    assert 2 * (w["htlc_lock"] + w["htlc_unlock"]) == 465_426
    assert 2 * (w["chan_open"] + w["chan_lock"] + w["chan_unlock"]) == 917_253


def test_cost_table_rejects_broken_calibration():
    with pytest.raises(CostTableError):
        CostTable(weights={"htlc_lock": 1})
    with pytest.raises(CostTableError):
        CostTable(weights={"chan_open": -5})


def test_cost_report_full_htlc_interaction(world):
    # one interaction: both chains lock, both unlock
    l1 = htlc_lock(world, "C1", ALICE.pk, BOB.pk, {"value": 100}, H_RHO, timeout=9)
    l2 = htlc_lock(world, "C2", BOB.pk, ALICE.pk, {"asset": "did:xrwa:asset-x"}, H_RHO, timeout=6)
    htlc_unlock(world, l2, RHO, at=2)
    htlc_unlock(world, l1, RHO, at=3)
    report = cost_report(world, "one-swap")
    assert report.htlc_total == 465_426
    assert report.channel_total == 0


def test_cost_report_full_channel_lifecycle(world):
    ch = locked_channel(world, net=100)
    chan_unlock(world, ch, RHO, at=1)
    report = cost_report(world)
    assert report.channel_total == 917_253
    assert report.htlc_total == 0
    assert report.counts["chan_open"] == 2
    assert report.counts["chan_lock"] == 2
    assert report.counts["chan_unlock"] == 2


# -------------------------------------------------------------- atomicity ----

def test_schedule_no_reveal_both_refunded():
    out = run_schedule(Schedule(None, 0, 2, 4, False))
    assert not out.assets_settled and not out.funds_settled


def test_schedule_prompt_reveal_both_settled():
    out = run_schedule(Schedule(1, 0, None, None, False))
    assert out.assets_settled and out.funds_settled


def test_schedule_late_reveal_rejected_then_refunds():
    out = run_schedule(Schedule(3, 0, 2, 4, True))  # reveal after t2=2
    assert not out.assets_settled and not out.funds_settled


def test_exhaustive_interleavings_no_mixed_outcomes():
    outcomes = explore_schedules(t1=4, t2=2, window=5)
    assert len(outcomes) == 6 * 3 * 6 * 6 * 2
    mixed = [o for o in outcomes if o.mixed]
    assert mixed == []
    # both terminal classes are actually reachable
    assert any(o.assets_settled and o.funds_settled for o in outcomes)
    assert any(not o.assets_settled and not o.funds_settled for o in outcomes)


def test_fuzzed_schedules_no_mixed_outcomes_small():
    outcomes = fuzz_schedules(500)
    assert all(not o.mixed for o in outcomes)
