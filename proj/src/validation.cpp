// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/validation.hpp>

#include <set>

namespace fusesim {

std::string to_string(ValidationError::Kind kind)
{
    switch (kind) {
    case ValidationError::Kind::UnknownInput: return "unknown-input";
    case ValidationError::Kind::AlreadySpent: return "already-spent";
    case ValidationError::Kind::MalformedWitness: return "malformed-witness";
    case ValidationError::Kind::ScriptFailed: return "script-failed";
    case ValidationError::Kind::LockTimeNotReached: return "locktime-not-reached";
    case ValidationError::Kind::ValueMismatch: return "value-mismatch";
    }
    return "unknown";
}

std::string to_string(const ValidationError& err)
{
    if (err.kind == ValidationError::Kind::ScriptFailed ||
        err.kind == ValidationError::Kind::MalformedWitness) {
        return to_string(err.kind) + "[" + std::to_string(err.input_index) + "]";
    }
    return to_string(err.kind);
}

namespace {

std::size_t stripped_size(const Witness& witness)
{
    std::size_t n = 0;
    for (const auto& item : witness) {
        if (item.kind != WitnessItem::Kind::Pad) ++n;
    }
    return n;
}

} // namespace

std::optional<ValidationError> validate(const Transaction& tx, const UtxoView& utxo,
                                        std::uint32_t current_round)
{
    using Kind = ValidationError::Kind;

    if (tx.inputs.empty() || tx.outputs.empty()) {
        return ValidationError{Kind::MalformedWitness, 0};
    }

    for (std::uint32_t i = 0; i < tx.inputs.size(); ++i) {
        if (!utxo.ever_existed(tx.inputs[i].prevout)) {
            return ValidationError{Kind::UnknownInput, i};
        }
    }

    // A duplicate outpoint inside one transaction is a self-conflict.
    std::set<Outpoint> seen;
    for (std::uint32_t i = 0; i < tx.inputs.size(); ++i) {
        if (utxo.find_unspent(tx.inputs[i].prevout) == nullptr ||
            !seen.insert(tx.inputs[i].prevout).second) {
            return ValidationError{Kind::AlreadySpent, i};
        }
    }

    for (std::uint32_t i = 0; i < tx.inputs.size(); ++i) {
        const UtxoEntry* entry = utxo.find_unspent(tx.inputs[i].prevout);
        if (stripped_size(tx.inputs[i].witness) != entry->script.arity()) {
            return ValidationError{Kind::MalformedWitness, i};
        }
    }

    const Digest body = body_digest(tx);
    for (std::uint32_t i = 0; i < tx.inputs.size(); ++i) {
        const UtxoEntry* entry = utxo.find_unspent(tx.inputs[i].prevout);
        bool ok = false;
        try {
            ok = eval_script(entry->script, tx.inputs[i].witness, body);
        } catch (const SlotOutOfRange&) {
            return ValidationError{Kind::MalformedWitness, i};
        }
        if (!ok) {
            return ValidationError{Kind::ScriptFailed, i};
        }
    }

    std::uint64_t in_value = 0;
    std::uint64_t out_value = 0;
    for (const auto& in : tx.inputs) in_value += utxo.find_unspent(in.prevout)->value;
    for (const auto& out : tx.outputs) out_value += out.value;
    if (in_value != out_value) {
        return ValidationError{Kind::ValueMismatch, 0};
    }

    if (tx.lock_time > current_round) {
        return ValidationError{Kind::LockTimeNotReached, 0};
    }

    return std::nullopt;
}

void MapUtxoView::add(const Outpoint& out, UtxoEntry entry)
{
    m_live[out] = std::move(entry);
    m_known[out] = true;
}

void MapUtxoView::remove(const Outpoint& out)
{
    m_live.erase(out);
}

const UtxoEntry* MapUtxoView::find_unspent(const Outpoint& out) const
{
    const auto it = m_live.find(out);
    return it == m_live.end() ? nullptr : &it->second;
}

bool MapUtxoView::ever_existed(const Outpoint& out) const
{
    return m_known.count(out) != 0;
}

} // namespace fusesim
