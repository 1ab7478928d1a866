// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/ledger.hpp>

#include <algorithm>
#include <stdexcept>

namespace fusesim {

void ChainParams::check() const
{
    if (max_bb < 1) {
        throw std::invalid_argument("max_bb must be at least 1");
    }
    if (d < 1) {
        throw std::invalid_argument("d must be positive");
    }
    if (t <= 3 * max_bb) {
        throw std::invalid_argument("t must exceed 3*max_bb");
    }
}

Ledger::Ledger(ChainParams params, NetworkStrategy network, std::uint64_t seed)
    : m_params(params), m_network(std::move(network)), m_seed(seed)
{
    m_params.check();
    if (m_network.max_bb() != m_params.max_bb) {
        throw std::invalid_argument("network strategy bound does not match chain params");
    }
}

std::vector<Outpoint> Ledger::genesis(const std::vector<Allocation>& allocations)
{
    if (m_genesis_done) {
        throw std::logic_error("genesis already performed");
    }
    if (allocations.empty()) {
        throw EmptyAllocation("genesis needs at least one allocation");
    }

    txid_audit::Sanction sanction;
    std::vector<Outpoint> outs;
    outs.reserve(allocations.size());
    for (std::uint32_t i = 0; i < allocations.size(); ++i) {
        const auto& alloc = allocations[i];
        if (alloc.value == 0) {
            throw std::invalid_argument("allocation value must be positive");
        }
        Transaction tx;
        tx.inputs.push_back(TxIn{Outpoint::null(i), {}});
        tx.outputs.push_back(TxOut{alloc.value, Script::pay_to_key(alloc.key)});
        const std::string role = alloc.label.empty() ? "funding" : alloc.label;
        confirm(tx, txid(tx), body_digest(tx), role);
        outs.push_back(Outpoint{txid(tx), 0});
        m_genesis_total += alloc.value;
    }
    m_genesis_done = true;
    return outs;
}

std::uint64_t Ledger::broadcast(Transaction tx, std::string role)
{
    txid_audit::Sanction sanction;

    auto [delivered, delay] = on_broadcast(m_network, tx, m_seed, m_next_entry - 1);
    if (delay < 1 || delay > m_params.max_bb) {
        throw std::invalid_argument("network strategy produced delay outside [1, max_bb]");
    }

    MempoolEntry entry;
    entry.id = m_next_entry++;
    entry.broadcast_round = m_round;
    entry.scheduled_round = m_round + delay;
    entry.role = role;
    if (delivered == tx) {
        entry.tx = std::move(tx);
    } else {
        // Substitution may only replace a transaction with a functionally
        // identical one; anything else is outside the adversary's power.
        if (body_digest(delivered) != body_digest(tx)) {
            throw std::invalid_argument("network substitution changed the transaction body");
        }
        entry.tx = std::move(tx);
        entry.substituted = std::move(delivered);
    }

    m_trace.add(TraceRecord{m_round, "broadcast", role, txid(entry.tx).hex(),
                            body_digest(entry.tx).hex(), "-"});
    m_status[entry.id] = TxStatus::Pending;
    m_mempool.push_back(std::move(entry));
    return m_next_entry - 1;
}

std::vector<InclusionResult> Ledger::advance_round()
{
    txid_audit::Sanction sanction;
    ++m_round;

    std::vector<MempoolEntry> due;
    std::vector<MempoolEntry> rest;
    for (auto& entry : m_mempool) {
        if (entry.scheduled_round == m_round) {
            due.push_back(std::move(entry));
        } else {
            rest.push_back(std::move(entry));
        }
    }
    m_mempool = std::move(rest);

    if (m_network.order() == NetworkStrategy::ConflictOrder::Lifo) {
        std::reverse(due.begin(), due.end());
    }

    std::vector<InclusionResult> results;
    results.reserve(due.size());
    for (auto& entry : due) {
        const Transaction& tx = entry.substituted ? *entry.substituted : entry.tx;
        const Digest id = txid(tx);
        const Digest body = body_digest(tx);
        const auto err = validate(tx, *this, m_round);
        if (!err) {
            confirm(tx, id, body, entry.role);
            m_status[entry.id] = TxStatus::Confirmed;
        } else {
            m_trace.add(
                TraceRecord{m_round, "reject", entry.role, id.hex(), body.hex(), to_string(*err)});
            m_status[entry.id] = TxStatus::Rejected;
            m_rejections[entry.id] = *err;
        }
        results.push_back(InclusionResult{entry.id, id, body, err, entry.role});
    }

    if (m_genesis_done && total_unspent() != m_genesis_total) {
        throw std::logic_error("value conservation violated");
    }
    return results;
}

void Ledger::confirm(Transaction tx, const Digest& id, const Digest& body, std::string role)
{
    for (const auto& in : tx.inputs) {
        m_utxo.erase(in.prevout);
    }
    for (std::uint32_t i = 0; i < tx.outputs.size(); ++i) {
        const auto& out = tx.outputs[i];
        UtxoEntry entry{out.value, out.script, std::nullopt};
        if (out.script.is_pay_to_key()) {
            entry.owner = out.script.root().key;
        }
        const Outpoint op{id, i};
        m_utxo.emplace(op, std::move(entry));
        m_ever[op] = true;
    }
    m_trace.add(TraceRecord{m_round, "confirm", role, id.hex(), body.hex(), "-"});
    m_confirmed.push_back(ConfirmedTx{m_round, std::move(tx), id, body, std::move(role)});
}

std::optional<ConfirmedTx> Ledger::confirmed_by_body(const Digest& body) const
{
    for (const auto& c : m_confirmed) {
        if (c.body == body) return c;
    }
    return std::nullopt;
}

bool Ledger::body_confirmed(const Digest& body) const
{
    return confirmed_by_body(body).has_value();
}

std::int64_t Ledger::balance(const KeyId& key) const
{
    std::int64_t total = 0;
    for (const auto& [op, entry] : m_utxo) {
        if (entry.script.is_pay_to_key(key)) {
            total += std::int64_t(entry.value);
        }
    }
    return total;
}

TxStatus Ledger::status(std::uint64_t entry) const
{
    const auto it = m_status.find(entry);
    if (it == m_status.end()) {
        throw std::out_of_range("unknown mempool entry");
    }
    return it->second;
}

std::optional<ValidationError> Ledger::rejection(std::uint64_t entry) const
{
    const auto it = m_rejections.find(entry);
    if (it == m_rejections.end()) return std::nullopt;
    return it->second;
}

std::uint64_t Ledger::total_unspent() const
{
    std::uint64_t total = 0;
    for (const auto& [op, entry] : m_utxo) total += entry.value;
    return total;
}

const UtxoEntry* Ledger::find_unspent(const Outpoint& out) const
{
    const auto it = m_utxo.find(out);
    return it == m_utxo.end() ? nullptr : &it->second;
}

bool Ledger::ever_existed(const Outpoint& out) const
{
    return m_ever.count(out) != 0;
}

} // namespace fusesim
