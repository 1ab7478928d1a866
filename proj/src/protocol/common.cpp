// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/protocol/common.hpp>

#include <algorithm>

namespace fusesim {

void PartyContext::learn(const std::vector<std::uint8_t>& secret)
{
    known_secrets.emplace(hash(secret), secret);
}

Deviation to_cs_point(const Deviation& point)
{
    if (!point) return std::nullopt;
    switch (*point) {
    case DeviationPoint::CsSkipCommit:
    case DeviationPoint::CsSkipFuseSig:
    case DeviationPoint::CsBadFuseSig:
    case DeviationPoint::CsSkipOpen:
    case DeviationPoint::CsSkipFuse:
        return point;
    case DeviationPoint::DrSkipCsCommit:
    case DeviationPoint::NewScsSkipCsCommit:
        return DeviationPoint::CsSkipCommit;
    case DeviationPoint::DrSkipCsFuseSig:
    case DeviationPoint::NewScsSkipCsFuseSig:
        return DeviationPoint::CsSkipFuseSig;
    case DeviationPoint::DrBadCsFuseSig:
    case DeviationPoint::NewScsBadCsFuseSig:
        return DeviationPoint::CsBadFuseSig;
    case DeviationPoint::DrSkipCsOpen:
    case DeviationPoint::NewScsSkipCsOpen:
        return DeviationPoint::CsSkipOpen;
    default:
        return std::nullopt;
    }
}

std::vector<std::uint8_t> extract_secret(const Ledger& ledger, const Digest& body,
                                         std::uint32_t slot)
{
    const auto confirmed = ledger.confirmed_by_body(body);
    if (!confirmed) {
        throw NotConfirmed("no confirmed transaction with body " + body.hex());
    }
    if (confirmed->tx.inputs.empty()) {
        throw NotASecret("transaction has no inputs");
    }
    std::vector<WitnessItem> stripped;
    for (const auto& item : confirmed->tx.inputs[0].witness) {
        if (item.kind != WitnessItem::Kind::Pad) stripped.push_back(item);
    }
    if (slot >= stripped.size() || stripped[slot].kind != WitnessItem::Kind::Secret) {
        throw NotASecret("witness slot " + std::to_string(slot) + " holds no secret");
    }
    return stripped[slot].data;
}

Transaction build_claim(const Outpoint& out, std::uint64_t value, const KeyId& payee,
                        std::uint32_t lock_time, std::uint32_t arity)
{
    Transaction tx;
    tx.inputs.push_back(TxIn{out, Witness(arity, WitnessItem::omitted())});
    tx.outputs.push_back(TxOut{value, Script::pay_to_key(payee)});
    tx.lock_time = lock_time;
    return tx;
}

namespace {

bool fill_witness(const Script::Node& node, const PartyContext& party, const Digest& body,
                  Witness& witness)
{
    switch (node.kind) {
    case Script::NodeKind::CheckSig: {
        if (node.key != party.keys.key_id) return false;
        WitnessItem item = WitnessItem::from_sig(sign(party.keys, body));
        if (witness[node.slot].kind != WitnessItem::Kind::Omitted &&
            !(witness[node.slot] == item)) {
            return false;
        }
        witness[node.slot] = std::move(item);
        return true;
    }
    case Script::NodeKind::CheckHash: {
        const auto it = party.known_secrets.find(node.expected);
        if (it == party.known_secrets.end()) return false;
        WitnessItem item = WitnessItem::secret(it->second);
        if (witness[node.slot].kind != WitnessItem::Kind::Omitted &&
            !(witness[node.slot] == item)) {
            return false;
        }
        witness[node.slot] = std::move(item);
        return true;
    }
    case Script::NodeKind::AllOf: {
        Witness scratch = witness;
        for (const auto& child : node.children) {
            if (!fill_witness(child, party, body, scratch)) return false;
        }
        witness = std::move(scratch);
        return true;
    }
    case Script::NodeKind::AnyOf: {
        for (const auto& child : node.children) {
            Witness scratch = witness;
            if (fill_witness(child, party, body, scratch)) {
                witness = std::move(scratch);
                return true;
            }
        }
        return false;
    }
    }
    return false;
}

} // namespace

std::optional<Witness> satisfy(const Script& script, const PartyContext& party,
                               const Digest& body)
{
    Witness witness(script.arity(), WitnessItem::omitted());
    if (!fill_witness(script.root(), party, body, witness)) {
        return std::nullopt;
    }
    return witness;
}

void ProtocolSession::sweep(Ledger& ledger, PartyContext& party)
{
    // Snapshot first: broadcasting does not mutate the UTXO set, but keep
    // the iteration order pinned to the map order regardless.
    std::vector<std::pair<Outpoint, UtxoEntry>> candidates;
    for (const auto& [op, entry] : ledger.utxo()) {
        if (entry.script.is_pay_to_key()) continue;  // plain balances stay put
        candidates.emplace_back(op, entry);
    }
    for (const auto& [op, entry] : candidates) {
        Transaction claim =
            build_claim(op, entry.value, party.keys.key_id, 0, entry.script.arity());
        const Digest body = body_digest(claim);
        const auto witness = satisfy(entry.script, party, body);
        if (!witness) continue;
        claim.inputs[0].witness = *witness;
        ledger.broadcast(std::move(claim), "sweep." + party.name);
    }
}

bool ProtocolSession::pending(const Ledger& ledger, const std::optional<std::uint64_t>& entry)
{
    return entry && ledger.status(*entry) == TxStatus::Pending;
}

} // namespace fusesim
