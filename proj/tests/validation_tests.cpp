// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/validation.hpp>

#include "testutil.hpp"

#include <doctest.h>

#include <random>

using namespace fusesim;
using Kind = ValidationError::Kind;

namespace {

struct Fixture {
    KeyPair owner = keygen(77, "utxo-owner");
    MapUtxoView view;
    Outpoint funded{hash("funded-parent"), 0};

    Fixture()
    {
        view.add(funded, UtxoEntry{50, Script::pay_to_key(owner.key_id), owner.key_id});
    }

    Transaction spend(std::uint64_t out_value = 50, std::uint32_t lock_time = 0) const
    {
        Transaction tx;
        tx.inputs.push_back(TxIn{funded, {}});
        tx.outputs.push_back(TxOut{out_value, Script::pay_to_key(owner.key_id)});
        tx.lock_time = lock_time;
        tx.inputs[0].witness = {WitnessItem::from_sig(sign(owner, body_digest(tx)))};
        return tx;
    }
};

} // namespace

TEST_CASE("a well-formed spend validates")
{
    Fixture fx;
    CHECK_FALSE(validate(fx.spend(), fx.view, 1).has_value());
}

TEST_CASE("unknown inputs are reported before anything else")
{
    Fixture fx;
    Transaction tx = fx.spend();
    tx.inputs[0].prevout = Outpoint{hash("never existed"), 0};
    const auto err = validate(tx, fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::UnknownInput);
}

TEST_CASE("spent outputs distinct from unknown ones")
{
    Fixture fx;
    const Transaction tx = fx.spend();
    fx.view.remove(fx.funded);  // spent, but it did exist
    const auto err = validate(tx, fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::AlreadySpent);
}

TEST_CASE("duplicate outpoints within one transaction self-conflict")
{
    Fixture fx;
    Transaction tx = fx.spend(100);
    tx.inputs.push_back(tx.inputs[0]);
    tx.inputs[0].witness.clear();
    tx.inputs[1].witness.clear();
    const Digest body = body_digest(tx);
    tx.inputs[0].witness = {WitnessItem::from_sig(sign(fx.owner, body))};
    tx.inputs[1].witness = {WitnessItem::from_sig(sign(fx.owner, body))};
    const auto err = validate(tx, fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::AlreadySpent);
    CHECK(err->input_index == 1);
}

TEST_CASE("witness shape is checked before script evaluation")
{
    Fixture fx;
    Transaction tx = fx.spend();
    tx.inputs[0].witness.clear();  // too short
    auto err = validate(tx, fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::MalformedWitness);

    tx = fx.spend();
    tx.inputs[0].witness.push_back(WitnessItem::omitted());  // non-pad extra
    err = validate(tx, fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::MalformedWitness);

    // Pad extras are fine.
    tx = fx.spend();
    tx.inputs[0].witness.push_back(WitnessItem::pad({1, 2}));
    CHECK_FALSE(validate(tx, fx.view, 1).has_value());
}

TEST_CASE("script failure carries the offending input index")
{
    Fixture fx;
    const KeyPair stranger = keygen(78, "stranger");
    Transaction tx = fx.spend();
    tx.inputs[0].witness = {WitnessItem::from_sig(sign(stranger, body_digest(tx)))};
    const auto err = validate(tx, fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::ScriptFailed);
    CHECK(err->input_index == 0);
}

TEST_CASE("value conservation is exact, no fees")
{
    Fixture fx;
    auto err = validate(fx.spend(49), fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::ValueMismatch);
    err = validate(fx.spend(51), fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::ValueMismatch);
}

TEST_CASE("lock time boundary: invalid strictly before, valid at the round")
{
    Fixture fx;
    const Transaction tx = fx.spend(50, 5);
    const auto err = validate(tx, fx.view, 4);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::LockTimeNotReached);
    CHECK_FALSE(validate(tx, fx.view, 5).has_value());
    CHECK_FALSE(validate(tx, fx.view, 6).has_value());
}

TEST_CASE("lock time is checked after scripts")
{
    Fixture fx;
    Transaction tx = fx.spend(50, 100);
    tx.inputs[0].witness = {WitnessItem::omitted()};
    const auto err = validate(tx, fx.view, 1);
    REQUIRE(err.has_value());
    CHECK(err->kind == Kind::ScriptFailed);
}

TEST_CASE("validated spends conserve value on random fixtures")
{
    std::mt19937_64 rng(404);
    for (int i = 0; i < 100; ++i) {
        const auto fx = test::valid_spend(rng, 10);
        CHECK_FALSE(validate(fx.tx, fx.view, 10).has_value());
        std::uint64_t in = 0;
        std::uint64_t out = 0;
        for (const auto& txin : fx.tx.inputs) in += fx.view.find_unspent(txin.prevout)->value;
        for (const auto& txout : fx.tx.outputs) out += txout.value;
        CHECK(in == out);
    }
}
