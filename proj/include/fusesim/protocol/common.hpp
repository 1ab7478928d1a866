// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_PROTOCOL_COMMON_HPP
#define FUSESIM_PROTOCOL_COMMON_HPP

#include <fusesim/ledger.hpp>
#include <fusesim/strategy.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusesim {

/** A party as the protocol layer sees it: keys and every secret preimage
 *  the party knows (its own draws plus anything extracted from confirmed
 *  witnesses), keyed by hash. */
struct PartyContext {
    std::string name;  // "a" / "b" in traces
    KeyPair keys;
    std::map<Digest, std::vector<std::uint8_t>> known_secrets;

    PartyContext(std::string name_, KeyPair keys_)
        : name(std::move(name_)), keys(std::move(keys_)) {}

    void learn(const std::vector<std::uint8_t>& secret);
    bool knows(const Digest& h) const { return known_secrets.count(h) != 0; }
};

using Deviation = std::optional<DeviationPoint>;

/** Maps an embedding protocol's deviation onto the inner timed-commitment
 *  session it concerns; unrelated deviations map to honest. */
Deviation to_cs_point(const Deviation& point);

struct NotConfirmed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotASecret : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Reads the secret revealed in a confirmed transaction located by body
 *  digest: input 0's pad-stripped witness at `slot` must hold Secret(x). */
std::vector<std::uint8_t> extract_secret(const Ledger& ledger, const Digest& body,
                                         std::uint32_t slot);

/** Spend `out` into a plain pay-to-key output of the same value. The witness
 *  holds `arity` omitted items; sign the body first, then fill the slots. */
Transaction build_claim(const Outpoint& out, std::uint64_t value, const KeyId& payee,
                        std::uint32_t lock_time = 0, std::uint32_t arity = 0);

/** Tries to satisfy a script with nothing but the party's own key and known
 *  preimages; stored third-party signatures do not count. Returns the
 *  witness, or nullopt when no branch is satisfiable. */
std::optional<Witness> satisfy(const Script& script, const PartyContext& party,
                               const Digest& body);

/** Verdict material a session hands to the classifier. `entitled_*` marks a
 *  party whose counterparty deviated after the commitment was established
 *  against it, so the protocol owes the party a d-coin penalty. */
struct SessionReport {
    std::string terminal_phase;
    bool entitled_a = false;
    bool entitled_b = false;
};

/** A protocol run: two party agents driven once per round, after the ledger
 *  has advanced. Deviating parties keep defending their own funds and, at
 *  the sweep round (t + 2 max_bb + 1), claim any leftover output they can
 *  satisfy single-handedly. */
class ProtocolSession {
public:
    virtual ~ProtocolSession() = default;

    virtual void on_round(Ledger& ledger) = 0;
    virtual bool quiescent() const = 0;
    virtual SessionReport report() const = 0;

protected:
    static void sweep(Ledger& ledger, PartyContext& party);
    static bool pending(const Ledger& ledger, const std::optional<std::uint64_t>& entry);
};

/** Round at which honest committers reveal secrets; the margin leaves time
 *  for three chained confirmations before t. */
inline std::uint32_t open_margin(const ChainParams& p)
{
    return p.t - 3 * p.max_bb;
}

inline std::uint32_t sweep_round(const ChainParams& p)
{
    return p.t + 2 * p.max_bb + 1;
}

} // namespace fusesim

#endif // FUSESIM_PROTOCOL_COMMON_HPP
