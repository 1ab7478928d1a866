// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_SCENARIO_HPP
#define FUSESIM_SCENARIO_HPP

#include <fusesim/ledger.hpp>
#include <fusesim/strategy.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fusesim {

struct ConfigError : std::invalid_argument {
    std::string field;

    ConfigError(std::string field_, const std::string& message)
        : std::invalid_argument(field_.empty() ? message : field_ + ": " + message),
          field(std::move(field_)) {}
};

/** One simulation: a protocol, chain parameters, a seed and the three
 *  strategies. Defaults give honest margins: t = 8 max_bb and
 *  max_rounds = t + 3 max_bb + 4, enough room for the sweep round. */
struct Scenario {
    Protocol protocol = Protocol::Cs;
    std::uint64_t seed = 1;
    ChainParams params{2, 10, 16};
    std::uint32_t max_rounds = 26;
    NetworkStrategy network = NetworkStrategy::honest(2);
    PartyStrategy party_a = PartyStrategy::honest(PartyRole::A);
    PartyStrategy party_b = PartyStrategy::honest(PartyRole::B);

    static Scenario defaults(Protocol protocol, std::uint32_t max_bb = 2);

    /** Throws ConfigError when invariants are broken: t > 3 max_bb,
     *  max_rounds > t + 2 max_bb, deviation points matching the protocol
     *  and role. */
    void check() const;
};

/** Parses the flat dotted key-value scenario format:
 *
 *      protocol = newscs
 *      seed = 7
 *      params.d = 10
 *      params.t = 16
 *      params.max_bb = 2
 *      params.max_rounds = 26
 *      network.malleate = all        # none | all
 *      network.delay = max           # min | max | <rounds>
 *      network.order = fifo          # fifo | lifo
 *      party.a.abort_at = skip-open
 *      party.b.withhold_secret = true
 *      party.b.send_bad_signature = true
 *
 *  '#' starts a comment; blank lines are ignored; unknown or
 *  ill-typed keys raise ConfigError with the offending field. */
Scenario parse_scenario(std::string_view text);

/** Resolves a deviation description for one party. `abort_at` takes a point
 *  name from deviation_points(); `withhold_secret` / `send_bad_signature`
 *  map onto the protocol's corresponding named points. */
PartyStrategy resolve_party(Protocol protocol, PartyRole role,
                            const std::optional<std::string>& abort_at, bool withhold_secret,
                            bool send_bad_signature);

} // namespace fusesim

#endif // FUSESIM_SCENARIO_HPP
