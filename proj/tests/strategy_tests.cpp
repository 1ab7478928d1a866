// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/strategy.hpp>

#include "testutil.hpp"

#include <doctest.h>

#include <random>

using namespace fusesim;

TEST_CASE("honest networks deliver untouched with minimal delay")
{
    std::mt19937_64 rng(5);
    const Transaction tx = test::random_transaction(rng);
    const auto [delivered, delay] = on_broadcast(NetworkStrategy::honest(2), tx, 1, 0);
    CHECK(delivered == tx);
    CHECK(delay == 1);
}

TEST_CASE("malleate-all preserves the body and moves the id, deterministically")
{
    std::mt19937_64 rng(6);
    const Transaction tx = test::random_transaction(rng);
    const auto strategy = NetworkStrategy::malleate_all(2);
    const auto [delivered, delay] = on_broadcast(strategy, tx, 9, 0);
    CHECK(delay == 1);
    CHECK(body_digest(delivered) == body_digest(tx));
    CHECK(txid(delivered) != txid(tx));

    const auto [again, delay2] = on_broadcast(strategy, tx, 9, 5);
    CHECK(txid(again) == txid(delivered));
    const auto [other_seed, delay3] = on_broadcast(strategy, tx, 10, 0);
    CHECK(body_digest(other_seed) == body_digest(tx));
    (void)delay2;
    (void)delay3;
}

TEST_CASE("per-body malleation hits only the listed transactions")
{
    std::mt19937_64 rng(7);
    const Transaction hit = test::random_transaction(rng);
    const Transaction miss = test::random_transaction(rng);
    auto strategy = NetworkStrategy::honest(2).with_malleated_bodies({body_digest(hit)});
    CHECK(on_broadcast(strategy, hit, 1, 0).first != hit);
    CHECK(on_broadcast(strategy, miss, 1, 0).first == miss);
}

TEST_CASE("max delay rule is constant at the bound")
{
    const auto strategy = NetworkStrategy::max_delay(2);
    for (std::uint64_t seq = 0; seq < 20; ++seq) {
        CHECK(strategy.delay_for(seq) == 2);
    }
}

TEST_CASE("enumeration is deterministic and seed-independent")
{
    const auto once = enumerate_strategies(1, Protocol::NewScs);
    const auto twice = enumerate_strategies(1, Protocol::NewScs);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once[i].network.name() == twice[i].network.name());
        CHECK(once[i].party_a.name() == twice[i].party_a.name());
        CHECK(once[i].party_b.name() == twice[i].party_b.name());
    }
}

TEST_CASE("enumeration counts follow the declared deviation points")
{
    for (const auto protocol :
         {Protocol::Cs, Protocol::DepositRefund, Protocol::ScsLegacy, Protocol::NewScs}) {
        const auto strategies = enumerate_strategies(2, protocol);
        const std::size_t a = deviation_points(protocol, PartyRole::A).size();
        const std::size_t b = deviation_points(protocol, PartyRole::B).size();
        CHECK(strategies.size() == 2 * 2 * (a + 1) * (b + 1));
    }
    CHECK(deviation_points(Protocol::Cs, PartyRole::A).size() == 4);
    CHECK(deviation_points(Protocol::Cs, PartyRole::B).size() == 1);
    CHECK(deviation_points(Protocol::NewScs, PartyRole::A).size() == 6);
}

TEST_CASE("enumeration includes the all-honest triple and the known attack")
{
    const auto strategies = enumerate_strategies(1, Protocol::ScsLegacy);
    bool honest_triple = false;
    bool attack = false;
    for (const auto& s : strategies) {
        if (!s.party_a.deviates() && !s.party_b.deviates() &&
            s.network.malleation() == NetworkStrategy::Malleation::None) {
            honest_triple = true;
        }
        if (s.network.malleation() == NetworkStrategy::Malleation::All &&
            s.party_a.deviates_at(DeviationPoint::LegacySkipOpen) && !s.party_b.deviates()) {
            attack = true;
        }
    }
    CHECK(honest_triple);
    CHECK(attack);
}

TEST_CASE("exhaustive enumeration is bounded")
{
    CHECK_THROWS_AS(enumerate_strategies(3, Protocol::Cs), ExhaustiveBoundExceeded);
    CHECK_NOTHROW(enumerate_strategies(2, Protocol::Cs));
}

TEST_CASE("party strategies expose their deviation flavor")
{
    const auto honest = PartyStrategy::honest(PartyRole::A);
    CHECK_FALSE(honest.deviates());
    CHECK(honest.name() == "honest");

    const auto withhold = PartyStrategy::abort_at(PartyRole::A, DeviationPoint::CsSkipOpen);
    CHECK(withhold.deviates());
    CHECK(withhold.withhold_secret());
    CHECK_FALSE(withhold.send_bad_signature());

    const auto bad_sig = PartyStrategy::abort_at(PartyRole::A, DeviationPoint::CsBadFuseSig);
    CHECK(bad_sig.send_bad_signature());
    CHECK_FALSE(bad_sig.withhold_secret());
    CHECK(bad_sig.name() == "deviation=bad-fuse-sig");
}
