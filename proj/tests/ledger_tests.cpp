// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/ledger.hpp>

#include "testutil.hpp"

#include <doctest.h>

using namespace fusesim;

namespace {

constexpr ChainParams PARAMS{2, 10, 16};

struct ChainFixture {
    KeyPair a = keygen(1000, "chain-a");
    KeyPair b = keygen(1000, "chain-b");

    Ledger make(NetworkStrategy net) const { return Ledger(PARAMS, std::move(net), 7); }

    static Transaction transfer(const Outpoint& from, std::uint64_t value, const KeyPair& owner,
                                const KeyId& to, std::uint32_t lock_time = 0)
    {
        Transaction tx;
        tx.inputs.push_back(TxIn{from, {}});
        tx.outputs.push_back(TxOut{value, Script::pay_to_key(to)});
        tx.lock_time = lock_time;
        tx.inputs[0].witness = {WitnessItem::from_sig(sign(owner, body_digest(tx)))};
        return tx;
    }
};

} // namespace

TEST_CASE("genesis funds allocations and rejects empty or zero ones")
{
    ChainFixture fx;
    Ledger ledger = fx.make(NetworkStrategy::honest(PARAMS.max_bb));
    const auto outs = ledger.genesis({{fx.a.key_id, 10, "funding.a"},
                                      {fx.a.key_id, 10, "funding.a2"},
                                      {fx.b.key_id, 10, "funding.b"},
                                      {fx.b.key_id, 10, "funding.b2"}});
    CHECK(outs.size() == 4);
    CHECK(ledger.balance(fx.a.key_id) == 20);
    CHECK(ledger.balance(fx.b.key_id) == 20);
    CHECK(ledger.genesis_total() == 40);
    CHECK(ledger.total_unspent() == 40);
    // Four funding transactions with distinct ids.
    CHECK(outs[0].txid != outs[1].txid);

    Ledger empty = fx.make(NetworkStrategy::honest(PARAMS.max_bb));
    CHECK_THROWS_AS(empty.genesis({}), EmptyAllocation);
    Ledger zero = fx.make(NetworkStrategy::honest(PARAMS.max_bb));
    CHECK_THROWS_AS(zero.genesis({{fx.a.key_id, 0, "funding.zero"}}),
                    std::invalid_argument);
}

TEST_CASE("honest strategy confirms at broadcast round plus one")
{
    ChainFixture fx;
    Ledger ledger = fx.make(NetworkStrategy::honest(PARAMS.max_bb));
    const auto outs = ledger.genesis({{fx.a.key_id, 10, "funding.a"}});

    const auto tx = ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id);
    const auto entry = ledger.broadcast(tx, "transfer");
    CHECK(ledger.status(entry) == TxStatus::Pending);

    const auto results = ledger.advance_round();
    CHECK(ledger.current_round() == 1);
    REQUIRE(results.size() == 1);
    CHECK_FALSE(results[0].error.has_value());
    CHECK(ledger.status(entry) == TxStatus::Confirmed);
    CHECK(ledger.balance(fx.b.key_id) == 10);
}

TEST_CASE("max delay strategy confirms exactly at the bound")
{
    ChainFixture fx;
    Ledger ledger = fx.make(NetworkStrategy::max_delay(PARAMS.max_bb));
    const auto outs = ledger.genesis({{fx.a.key_id, 10, "funding.a"}});
    const auto entry =
        ledger.broadcast(ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id), "transfer");

    ledger.advance_round();
    CHECK(ledger.status(entry) == TxStatus::Pending);
    ledger.advance_round();
    CHECK(ledger.status(entry) == TxStatus::Confirmed);
    CHECK(ledger.current_round() == PARAMS.max_bb);
}

TEST_CASE("every constant delay within the bound is reachable and bounded")
{
    ChainFixture fx;
    for (std::uint32_t max_bb : {1u, 2u}) {
        for (std::uint32_t delay = 1; delay <= max_bb; ++delay) {
            const ChainParams params{max_bb, 10, 8 * max_bb};
            Ledger ledger(params, NetworkStrategy::constant_delay(max_bb, delay), 7);
            const auto outs = ledger.genesis({{fx.a.key_id, 10, "funding.a"}});
            const auto entry = ledger.broadcast(
                ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id), "transfer");
            for (std::uint32_t r = 0; r < delay; ++r) {
                CHECK(ledger.status(entry) == TxStatus::Pending);
                ledger.advance_round();
            }
            CHECK(ledger.status(entry) == TxStatus::Confirmed);
            CHECK(ledger.current_round() <= max_bb);
        }
    }
}

TEST_CASE("per-entry delay tables schedule each broadcast separately")
{
    ChainFixture fx;
    Ledger ledger = fx.make(NetworkStrategy::delay_table(PARAMS.max_bb, {2, 1}));
    const auto outs =
        ledger.genesis({{fx.a.key_id, 10, "funding.a"}, {fx.b.key_id, 10, "funding.b"}});
    const auto e0 =
        ledger.broadcast(ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id), "t0");
    const auto e1 =
        ledger.broadcast(ChainFixture::transfer(outs[1], 10, fx.b, fx.a.key_id), "t1");
    ledger.advance_round();
    CHECK(ledger.status(e0) == TxStatus::Pending);
    CHECK(ledger.status(e1) == TxStatus::Confirmed);
    ledger.advance_round();
    CHECK(ledger.status(e0) == TxStatus::Confirmed);
}

TEST_CASE("invalid strategies are rejected at construction")
{
    CHECK_THROWS_AS(NetworkStrategy::constant_delay(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(NetworkStrategy::constant_delay(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(NetworkStrategy::delay_table(2, {1, 4}), std::invalid_argument);
    CHECK_THROWS_AS(NetworkStrategy::honest(0), std::invalid_argument);
    CHECK_THROWS_AS(ChainParams(2, 10, 6).check(), std::invalid_argument);
    CHECK_THROWS_AS(ChainParams(2, 0, 16).check(), std::invalid_argument);
}

TEST_CASE("same-round conflicts resolve in adversary order")
{
    ChainFixture fx;
    for (const auto order : {NetworkStrategy::ConflictOrder::Fifo,
                             NetworkStrategy::ConflictOrder::Lifo}) {
        Ledger ledger =
            fx.make(NetworkStrategy::honest(PARAMS.max_bb).with_order(order));
        const auto outs = ledger.genesis({{fx.a.key_id, 10, "funding.a"}});
        const auto first =
            ledger.broadcast(ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id), "x");
        const auto second =
            ledger.broadcast(ChainFixture::transfer(outs[0], 10, fx.a, fx.a.key_id), "y");
        ledger.advance_round();

        const auto winner = order == NetworkStrategy::ConflictOrder::Fifo ? first : second;
        const auto loser = order == NetworkStrategy::ConflictOrder::Fifo ? second : first;
        CHECK(ledger.status(winner) == TxStatus::Confirmed);
        CHECK(ledger.status(loser) == TxStatus::Rejected);
        REQUIRE(ledger.rejection(loser).has_value());
        CHECK(ledger.rejection(loser)->kind == ValidationError::Kind::AlreadySpent);
    }
}

TEST_CASE("malleating networks substitute an equivalent transaction")
{
    ChainFixture fx;
    Ledger ledger = fx.make(NetworkStrategy::malleate_all(PARAMS.max_bb));
    const auto outs = ledger.genesis({{fx.a.key_id, 10, "funding.a"}});
    const auto tx = ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id);
    const Digest original_id = txid(tx);
    const Digest body = body_digest(tx);

    ledger.broadcast(tx, "transfer");
    const auto results = ledger.advance_round();
    REQUIRE(results.size() == 1);
    CHECK_FALSE(results[0].error.has_value());
    CHECK(results[0].id != original_id);
    CHECK(results[0].body == body);

    const auto found = ledger.confirmed_by_body(body);
    REQUIRE(found.has_value());
    CHECK(found->id != original_id);
    CHECK(ledger.balance(fx.b.key_id) == 10);

    CHECK_FALSE(ledger.confirmed_by_body(hash("nothing")).has_value());
}

TEST_CASE("time-locked transactions rebroadcast after rejection")
{
    ChainFixture fx;
    Ledger ledger = fx.make(NetworkStrategy::honest(PARAMS.max_bb));
    const auto outs = ledger.genesis({{fx.a.key_id, 10, "funding.a"}});
    const auto locked =
        ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id, PARAMS.t);

    const auto early = ledger.broadcast(locked, "early");
    ledger.advance_round();
    REQUIRE(ledger.rejection(early).has_value());
    CHECK(ledger.rejection(early)->kind == ValidationError::Kind::LockTimeNotReached);

    while (ledger.current_round() < PARAMS.t) ledger.advance_round();
    const auto retry = ledger.broadcast(locked, "retry");
    ledger.advance_round();
    CHECK(ledger.status(retry) == TxStatus::Confirmed);
    CHECK(ledger.current_round() <= PARAMS.t + PARAMS.max_bb);
}

TEST_CASE("conservation and double-spend freedom hold across a busy trace")
{
    ChainFixture fx;
    Ledger ledger = fx.make(NetworkStrategy::max_delay(PARAMS.max_bb, true));
    const auto outs =
        ledger.genesis({{fx.a.key_id, 10, "funding.a"}, {fx.b.key_id, 10, "funding.b"}});

    ledger.broadcast(ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id), "t0");
    ledger.broadcast(ChainFixture::transfer(outs[1], 10, fx.b, fx.a.key_id), "t1");
    for (int i = 0; i < 6; ++i) {
        ledger.advance_round();
        CHECK(ledger.total_unspent() == ledger.genesis_total());
    }

    std::set<Outpoint> spent;
    for (const auto& c : ledger.confirmed()) {
        for (const auto& in : c.tx.inputs) {
            if (in.prevout.is_null()) continue;
            CHECK(spent.insert(in.prevout).second);
        }
    }
    // Confirmed bodies are unique.
    std::set<Digest> bodies;
    for (const auto& c : ledger.confirmed()) {
        CHECK(bodies.insert(c.body).second);
    }
}

TEST_CASE("trace records carry round, event, ids and error details")
{
    ChainFixture fx;
    Ledger ledger = fx.make(NetworkStrategy::honest(PARAMS.max_bb));
    const auto outs = ledger.genesis({{fx.a.key_id, 10, "funding.a"}});
    ledger.broadcast(ChainFixture::transfer(outs[0], 10, fx.a, fx.b.key_id), "transfer");
    ledger.broadcast(ChainFixture::transfer(outs[0], 10, fx.a, fx.a.key_id), "conflict");
    ledger.advance_round();

    const auto& records = ledger.trace().records();
    REQUIRE(records.size() >= 5);  // genesis confirm + 2 broadcasts + confirm + reject
    bool saw_reject = false;
    for (const auto& r : records) {
        if (r.event == "reject") {
            saw_reject = true;
            CHECK(r.detail == "already-spent");
            CHECK(r.txid.size() == 64);
        }
    }
    CHECK(saw_reject);
}
