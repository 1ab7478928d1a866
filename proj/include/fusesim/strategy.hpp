// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_STRATEGY_HPP
#define FUSESIM_STRATEGY_HPP

#include <fusesim/transaction.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fusesim {

enum class Protocol { Cs, DepositRefund, ScsLegacy, NewScs };

std::string to_string(Protocol protocol);
std::optional<Protocol> parse_protocol(std::string_view name);

/** Two-party protocols throughout; for the timed commitment, party A is the
 *  committer and party B the recipient. */
enum class PartyRole { A, B };

std::string to_string(PartyRole role);

/** Network misbehavior. The adversary picks inclusion delays in
 *  [1, max_bb], may substitute a broadcast transaction with a malleated
 *  (body-preserving) variant, and orders same-round inclusions. Strategies
 *  that could violate these bounds are rejected at construction. */
class NetworkStrategy {
public:
    enum class Malleation { None, All, Bodies };
    enum class DelayRule { Constant, Maximal, Table };
    enum class ConflictOrder { Fifo, Lifo };

    /** Minimal delay, no malleation. */
    static NetworkStrategy honest(std::uint32_t max_bb);
    static NetworkStrategy malleate_all(std::uint32_t max_bb);
    static NetworkStrategy constant_delay(std::uint32_t max_bb, std::uint32_t delay,
                                          bool malleate = false);
    static NetworkStrategy max_delay(std::uint32_t max_bb, bool malleate = false);
    /** Per-entry delays, indexed by broadcast sequence number; entries past
     *  the table fall back to the minimal delay. */
    static NetworkStrategy delay_table(std::uint32_t max_bb, std::vector<std::uint32_t> delays,
                                       bool malleate = false);

    NetworkStrategy& with_order(ConflictOrder order);
    NetworkStrategy& with_malleated_bodies(std::set<Digest> bodies);

    std::uint32_t max_bb() const { return m_max_bb; }
    std::uint32_t delay_for(std::uint64_t entry_seq) const;
    bool should_malleate(const Transaction& tx) const;
    ConflictOrder order() const { return m_order; }
    Malleation malleation() const { return m_malleation; }

    std::string name() const;

private:
    NetworkStrategy(std::uint32_t max_bb, Malleation malleation, DelayRule rule,
                    std::uint32_t constant, std::vector<std::uint32_t> table);

    std::uint32_t m_max_bb;
    Malleation m_malleation;
    std::set<Digest> m_bodies;
    DelayRule m_delay_rule;
    std::uint32_t m_constant_delay;
    std::vector<std::uint32_t> m_delay_table;
    ConflictOrder m_order = ConflictOrder::Fifo;
};

/** Applies the strategy to one broadcast: returns the transaction that will
 *  actually be scheduled (possibly a malleated substitute with identical
 *  body digest) together with its inclusion delay. Deterministic in
 *  (strategy, tx, seed, entry_seq); the sequence number indexes per-entry
 *  delay tables. */
std::pair<Transaction, std::uint32_t> on_broadcast(const NetworkStrategy& strategy,
                                                   const Transaction& tx, std::uint64_t seed,
                                                   std::uint64_t entry_seq = 0);

/** Named protocol steps a party can deviate at. A deviating party omits
 *  exactly the named obligation (or sends a garbage signature at it) and
 *  otherwise keeps following the protocol, including its own defensive
 *  exits. */
enum class DeviationPoint {
    // timed commitment: committer then recipient
    CsSkipCommit,
    CsSkipFuseSig,
    CsBadFuseSig,
    CsSkipOpen,
    CsSkipFuse,
    // deposit refund: depositor A, committing counterparty B
    DrSkipDeposit,
    DrSkipFuse,
    DrSkipCsCommit,
    DrSkipCsFuseSig,
    DrBadCsFuseSig,
    DrSkipCsOpen,
    // legacy simultaneous commitment
    LegacySkipCommitSig,
    LegacySkipFuseSig,
    LegacySkipOpen,
    // malleability-resistant simultaneous commitment
    NewScsSkipCsCommit,
    NewScsSkipCsFuseSig,
    NewScsBadCsFuseSig,
    NewScsSkipCommitSig,
    NewScsSkipOpen,
    NewScsSkipCsOpen,
};

std::string to_string(DeviationPoint point);

/** The points declared by each protocol's state machine, in enumeration
 *  order. Strategy enumeration and the scenario parser both consult this. */
std::vector<DeviationPoint> deviation_points(Protocol protocol, PartyRole role);

/** Whether deviating at the point sends a corrupted signature (as opposed
 *  to omitting an action), and whether it withholds the party's secret. */
bool is_bad_signature_point(DeviationPoint point);
bool is_withhold_secret_point(DeviationPoint point);

/** Per-party behavior. At most one deviation may be active, so every
 *  outcome is attributable to a single named step. */
class PartyStrategy {
public:
    static PartyStrategy honest(PartyRole role);
    static PartyStrategy abort_at(PartyRole role, DeviationPoint point);

    PartyRole role() const { return m_role; }
    std::optional<DeviationPoint> abort_point() const { return m_point; }
    bool withhold_secret() const;
    bool send_bad_signature() const;

    bool deviates() const { return m_point.has_value(); }
    bool deviates_at(DeviationPoint point) const { return m_point == point; }

    std::string name() const;

private:
    PartyStrategy(PartyRole role, std::optional<DeviationPoint> point);

    PartyRole m_role;
    std::optional<DeviationPoint> m_point;
};

struct StrategyTriple {
    NetworkStrategy network;
    PartyStrategy party_a;
    PartyStrategy party_b;
};

struct ExhaustiveBoundExceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/** Full cross product of {malleation off/on} x {all-1, all-max delays} x
 *  {honest + each declared deviation point per party}, in deterministic
 *  order. Exhaustive mode is bounded: max_bb must be at most 2. */
std::vector<StrategyTriple> enumerate_strategies(std::uint32_t max_bb, Protocol protocol);

} // namespace fusesim

#endif // FUSESIM_STRATEGY_HPP
