// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/transaction.hpp>

#include <utility>

namespace fusesim {

namespace {

class Encoder {
public:
    void u8(std::uint8_t v) { m_out.push_back(v); }

    void u32(std::uint32_t v)
    {
        for (int i = 0; i < 4; ++i) m_out.push_back(std::uint8_t(v >> (8 * i)));
    }

    void u64(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i) m_out.push_back(std::uint8_t(v >> (8 * i)));
    }

    void digest(const Digest& d) { m_out.insert(m_out.end(), d.bytes.begin(), d.bytes.end()); }

    void blob(std::span<const std::uint8_t> data)
    {
        u32(std::uint32_t(data.size()));
        m_out.insert(m_out.end(), data.begin(), data.end());
    }

    std::vector<std::uint8_t> take() { return std::move(m_out); }

private:
    std::vector<std::uint8_t> m_out;
};

void encode_node(Encoder& enc, const Script::Node& node)
{
    enc.u8(std::uint8_t(node.kind));
    switch (node.kind) {
    case Script::NodeKind::CheckSig:
        enc.digest(node.key.value);
        enc.u32(node.slot);
        break;
    case Script::NodeKind::CheckHash:
        enc.digest(node.expected);
        enc.u32(node.slot);
        break;
    case Script::NodeKind::AllOf:
    case Script::NodeKind::AnyOf:
        enc.u32(std::uint32_t(node.children.size()));
        for (const auto& child : node.children) encode_node(enc, child);
        break;
    }
}

void encode_witness_item(Encoder& enc, const WitnessItem& item)
{
    enc.u8(std::uint8_t(item.kind));
    switch (item.kind) {
    case WitnessItem::Kind::Omitted:
        break;
    case WitnessItem::Kind::Sig:
        enc.blob(item.sig.bytes);
        enc.digest(item.sig.signer.value);
        break;
    case WitnessItem::Kind::Secret:
    case WitnessItem::Kind::Pad:
        enc.blob(item.data);
        break;
    }
}

} // namespace

std::vector<std::uint8_t> encode(const Transaction& tx, bool include_witnesses)
{
    Encoder enc;
    enc.u32(std::uint32_t(tx.inputs.size()));
    for (const auto& in : tx.inputs) {
        enc.digest(in.prevout.txid);
        enc.u32(in.prevout.index);
        if (include_witnesses) {
            enc.u32(std::uint32_t(in.witness.size()));
            for (const auto& item : in.witness) encode_witness_item(enc, item);
        } else {
            enc.u32(0);
        }
    }
    enc.u32(std::uint32_t(tx.outputs.size()));
    for (const auto& out : tx.outputs) {
        enc.u64(out.value);
        enc.u32(out.script.arity());
        encode_node(enc, out.script.root());
    }
    enc.u32(tx.lock_time);
    return enc.take();
}

namespace txid_audit {

namespace {
Observer g_observer;
thread_local int g_sanction_depth = 0;
} // namespace

void set_observer(Observer observer)
{
    g_observer = std::move(observer);
}

bool sanctioned()
{
    return g_sanction_depth > 0;
}

Sanction::Sanction()
{
    ++g_sanction_depth;
}

Sanction::~Sanction()
{
    --g_sanction_depth;
}

} // namespace txid_audit

Digest txid(const Transaction& tx)
{
    if (txid_audit::g_observer && !txid_audit::sanctioned()) {
        txid_audit::g_observer(tx);
    }
    return hash(encode(tx, true));
}

Digest body_digest(const Transaction& tx)
{
    return hash(encode(tx, false));
}

Transaction malleate(const Transaction& tx, std::span<const std::uint8_t> padding)
{
    if (padding.empty()) {
        throw EmptyPadding("malleation padding must be non-empty");
    }
    if (tx.inputs.empty()) {
        throw std::invalid_argument("cannot malleate a transaction without inputs");
    }
    Transaction out = tx;
    out.inputs[0].witness.push_back(
        WitnessItem::pad(std::vector<std::uint8_t>(padding.begin(), padding.end())));
    return out;
}

Transaction malleate(const Transaction& tx, std::string_view padding)
{
    return malleate(tx, as_bytes(padding));
}

} // namespace fusesim
