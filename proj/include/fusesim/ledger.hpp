// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_LEDGER_HPP
#define FUSESIM_LEDGER_HPP

#include <fusesim/strategy.hpp>
#include <fusesim/trace.hpp>
#include <fusesim/transaction.hpp>
#include <fusesim/validation.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fusesim {

struct ChainParams {
    std::uint32_t max_bb = 1;  // maximal rounds between broadcast and inclusion
    std::uint64_t d = 1;       // deposit size in coin units
    std::uint32_t t = 0;       // commitment deadline round

    /** Throws std::invalid_argument unless max_bb >= 1, d >= 1 and
     *  t > 3 * max_bb (the margin the deadline logic relies on). */
    void check() const;
};

struct Allocation {
    KeyId key;
    std::uint64_t value = 0;
    std::string label;
};

struct EmptyAllocation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MempoolEntry {
    std::uint64_t id = 0;
    Transaction tx;
    std::optional<Transaction> substituted;  // body digest equals tx's
    std::uint32_t broadcast_round = 0;
    std::uint32_t scheduled_round = 0;
    std::string role;
};

enum class TxStatus { Pending, Confirmed, Rejected };

struct ConfirmedTx {
    std::uint32_t round = 0;
    Transaction tx;
    Digest id;
    Digest body;
    std::string role;
};

struct InclusionResult {
    std::uint64_t entry = 0;
    Digest id;
    Digest body;
    std::optional<ValidationError> error;  // nullopt: confirmed
    std::string role;
};

/** Round-based single-chain ledger. Inclusion timing, substitution and
 *  same-round ordering of broadcast transactions are controlled by the
 *  network strategy, within the max_bb bound; confirmation is final.
 *  Rejected entries are dropped, never retried; rebroadcast is the
 *  protocol layer's business. One instance is single-threaded. */
class Ledger : public UtxoView {
public:
    Ledger(ChainParams params, NetworkStrategy network, std::uint64_t seed);

    /** One confirmed funding transaction per allocation, each spendable by
     *  a plain pay-to-key script, all at round 0. Returns the funding
     *  outpoints in allocation order. Must be called once, first. */
    std::vector<Outpoint> genesis(const std::vector<Allocation>& allocations);

    /** Queues a transaction; the network strategy fixes its substitution
     *  and its inclusion round in (now, now + max_bb]. Returns an entry id
     *  whose fate can be queried with status()/rejection(). */
    std::uint64_t broadcast(Transaction tx, std::string role);

    /** Advances time by one round and processes every entry scheduled for
     *  it, in adversary order. Confirmed transactions update the UTXO set
     *  immediately, so a later same-round conflict fails AlreadySpent. */
    std::vector<InclusionResult> advance_round();

    std::uint32_t current_round() const { return m_round; }
    const ChainParams& params() const { return m_params; }
    const NetworkStrategy& network() const { return m_network; }

    std::optional<ConfirmedTx> confirmed_by_body(const Digest& body) const;
    bool body_confirmed(const Digest& body) const;

    /** Sum of unspent plain pay-to-key outputs owned by the key. Composite
     *  protocol outputs belong to no one's balance. */
    std::int64_t balance(const KeyId& key) const;

    TxStatus status(std::uint64_t entry) const;
    std::optional<ValidationError> rejection(std::uint64_t entry) const;

    const std::map<Outpoint, UtxoEntry>& utxo() const { return m_utxo; }
    const std::vector<ConfirmedTx>& confirmed() const { return m_confirmed; }
    bool mempool_empty() const { return m_mempool.empty(); }
    const std::vector<MempoolEntry>& mempool() const { return m_mempool; }

    std::uint64_t genesis_total() const { return m_genesis_total; }
    std::uint64_t total_unspent() const;

    TraceLog& trace() { return m_trace; }
    const TraceLog& trace() const { return m_trace; }

    // UtxoView
    const UtxoEntry* find_unspent(const Outpoint& out) const override;
    bool ever_existed(const Outpoint& out) const override;

private:
    void confirm(Transaction tx, const Digest& id, const Digest& body, std::string role);

    ChainParams m_params;
    NetworkStrategy m_network;
    std::uint64_t m_seed;
    std::uint32_t m_round = 0;
    std::uint64_t m_next_entry = 1;

    std::vector<MempoolEntry> m_mempool;
    std::vector<ConfirmedTx> m_confirmed;
    std::map<Outpoint, UtxoEntry> m_utxo;
    std::map<Outpoint, bool> m_ever;  // every outpoint ever created
    std::map<std::uint64_t, TxStatus> m_status;
    std::map<std::uint64_t, ValidationError> m_rejections;
    std::uint64_t m_genesis_total = 0;
    bool m_genesis_done = false;

    TraceLog m_trace;
};

} // namespace fusesim

#endif // FUSESIM_LEDGER_HPP
