// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_TESTS_TESTUTIL_HPP
#define FUSESIM_TESTS_TESTUTIL_HPP

#include <fusesim/transaction.hpp>
#include <fusesim/validation.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace fusesim::test {

/** Independent SHA-256 (OpenSSL) used as the hash oracle. */
Digest openssl_sha256(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n);
Digest random_digest(std::mt19937_64& rng);

/** Arbitrary structurally well-formed transaction: random scripts, random
 *  witness items, random lock time. Not necessarily spendable. */
Transaction random_transaction(std::mt19937_64& rng);

/** A transaction plus a UTXO view it validly spends: real keys, real
 *  signatures over the body, conserved values. */
struct SpendFixture {
    Transaction tx;
    MapUtxoView view;
};

SpendFixture valid_spend(std::mt19937_64& rng, std::uint32_t current_round);

/** Round-trip decoder for the canonical encoding; the inverse of
 *  encode(tx, true), implemented independently for the injectivity check. */
Transaction decode(const std::vector<std::uint8_t>& bytes);

} // namespace fusesim::test

#endif // FUSESIM_TESTS_TESTUTIL_HPP
