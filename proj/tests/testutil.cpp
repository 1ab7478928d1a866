// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "testutil.hpp"

#include <openssl/evp.h>

#include <stdexcept>
#include <string>

namespace fusesim::test {

Digest openssl_sha256(std::span<const std::uint8_t> data)
{
    Digest out;
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out.bytes.data(), &len) != 1 || len != 32) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("openssl sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    return out;
}

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n)
{
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = std::uint8_t(rng());
    return out;
}

Digest random_digest(std::mt19937_64& rng)
{
    Digest d;
    for (auto& b : d.bytes) b = std::uint8_t(rng());
    return d;
}

namespace {

Script::Node random_leaf(std::mt19937_64& rng, std::uint32_t arity)
{
    const std::uint32_t slot = std::uint32_t(rng() % arity);
    if (rng() % 2 == 0) {
        return Script::Node::check_sig(KeyId{random_digest(rng)}, slot);
    }
    return Script::Node::check_hash(random_digest(rng), slot);
}

Script random_script(std::mt19937_64& rng)
{
    const std::uint32_t arity = 1 + std::uint32_t(rng() % 4);
    switch (rng() % 3) {
    case 0: return Script(arity, random_leaf(rng, arity));
    case 1:
        return Script(arity, Script::Node::all_of({random_leaf(rng, arity),
                                                   random_leaf(rng, arity)}));
    default:
        return Script(arity,
                      Script::Node::any_of(
                          {Script::Node::all_of({random_leaf(rng, arity), random_leaf(rng, arity)}),
                           random_leaf(rng, arity)}));
    }
}

WitnessItem random_witness_item(std::mt19937_64& rng)
{
    switch (rng() % 4) {
    case 0: return WitnessItem::omitted();
    case 1: {
        Signature sig{random_bytes(rng, 32), KeyId{random_digest(rng)}};
        return WitnessItem::from_sig(std::move(sig));
    }
    case 2: return WitnessItem::secret(random_bytes(rng, 1 + rng() % 16));
    default: return WitnessItem::pad(random_bytes(rng, 1 + rng() % 8));
    }
}

} // namespace

Transaction random_transaction(std::mt19937_64& rng)
{
    Transaction tx;
    const std::size_t n_in = 1 + rng() % 3;
    const std::size_t n_out = 1 + rng() % 3;
    for (std::size_t i = 0; i < n_in; ++i) {
        TxIn in;
        in.prevout = Outpoint{random_digest(rng), std::uint32_t(rng() % 4)};
        const std::size_t n_items = rng() % 5;
        for (std::size_t j = 0; j < n_items; ++j) {
            in.witness.push_back(random_witness_item(rng));
        }
        tx.inputs.push_back(std::move(in));
    }
    for (std::size_t i = 0; i < n_out; ++i) {
        tx.outputs.push_back(TxOut{rng() % 1000, random_script(rng)});
    }
    tx.lock_time = std::uint32_t(rng() % 20);
    return tx;
}

SpendFixture valid_spend(std::mt19937_64& rng, std::uint32_t current_round)
{
    SpendFixture fx;
    const std::size_t n_in = 1 + rng() % 3;
    std::uint64_t total = 0;
    std::vector<KeyPair> keys;
    for (std::size_t i = 0; i < n_in; ++i) {
        const KeyPair kp = keygen(rng(), "fixture-" + std::to_string(i));
        keys.push_back(kp);
        const std::uint64_t value = 1 + rng() % 500;
        total += value;
        const Outpoint op{random_digest(rng), std::uint32_t(rng() % 4)};
        fx.view.add(op, UtxoEntry{value, Script::pay_to_key(kp.key_id), kp.key_id});
        fx.tx.inputs.push_back(TxIn{op, {}});
    }

    const std::size_t n_out = 1 + rng() % 3;
    std::uint64_t remaining = total;
    for (std::size_t i = 0; i < n_out; ++i) {
        const std::uint64_t value = i + 1 == n_out ? remaining : remaining / 2;
        remaining -= value;
        fx.tx.outputs.push_back(
            TxOut{value, Script::pay_to_key(KeyId{random_digest(rng)})});
    }
    fx.tx.lock_time = current_round == 0 ? 0 : std::uint32_t(rng() % current_round);

    const Digest body = body_digest(fx.tx);
    for (std::size_t i = 0; i < n_in; ++i) {
        fx.tx.inputs[i].witness = {WitnessItem::from_sig(sign(keys[i], body))};
    }
    return fx;
}

namespace {

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& data) : m_data(data) {}

    std::uint8_t u8() { return m_data.at(m_pos++); }

    std::uint32_t u32()
    {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(u8()) << (8 * i);
        return v;
    }

    std::uint64_t u64()
    {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(u8()) << (8 * i);
        return v;
    }

    Digest digest()
    {
        Digest d;
        for (auto& b : d.bytes) b = u8();
        return d;
    }

    std::vector<std::uint8_t> blob()
    {
        const std::uint32_t n = u32();
        std::vector<std::uint8_t> out(n);
        for (auto& b : out) b = u8();
        return out;
    }

    bool done() const { return m_pos == m_data.size(); }

private:
    const std::vector<std::uint8_t>& m_data;
    std::size_t m_pos = 0;
};

Script::Node decode_node(Reader& r)
{
    const auto kind = Script::NodeKind(r.u8());
    switch (kind) {
    case Script::NodeKind::CheckSig: {
        const KeyId key{r.digest()};
        const std::uint32_t slot = r.u32();
        return Script::Node::check_sig(key, slot);
    }
    case Script::NodeKind::CheckHash: {
        const Digest expected = r.digest();
        const std::uint32_t slot = r.u32();
        return Script::Node::check_hash(expected, slot);
    }
    case Script::NodeKind::AllOf:
    case Script::NodeKind::AnyOf: {
        const std::uint32_t n = r.u32();
        std::vector<Script::Node> children;
        for (std::uint32_t i = 0; i < n; ++i) children.push_back(decode_node(r));
        return kind == Script::NodeKind::AllOf ? Script::Node::all_of(std::move(children))
                                               : Script::Node::any_of(std::move(children));
    }
    }
    throw std::runtime_error("bad script node tag");
}

WitnessItem decode_witness_item(Reader& r)
{
    const auto kind = WitnessItem::Kind(r.u8());
    switch (kind) {
    case WitnessItem::Kind::Omitted: return WitnessItem::omitted();
    case WitnessItem::Kind::Sig: {
        auto bytes = r.blob();
        const KeyId signer{r.digest()};
        return WitnessItem::from_sig(Signature{std::move(bytes), signer});
    }
    case WitnessItem::Kind::Secret: return WitnessItem::secret(r.blob());
    case WitnessItem::Kind::Pad: return WitnessItem::pad(r.blob());
    }
    throw std::runtime_error("bad witness tag");
}

} // namespace

Transaction decode(const std::vector<std::uint8_t>& bytes)
{
    Reader r(bytes);
    Transaction tx;
    const std::uint32_t n_in = r.u32();
    for (std::uint32_t i = 0; i < n_in; ++i) {
        TxIn in;
        in.prevout.txid = r.digest();
        in.prevout.index = r.u32();
        const std::uint32_t n_items = r.u32();
        for (std::uint32_t j = 0; j < n_items; ++j) {
            in.witness.push_back(decode_witness_item(r));
        }
        tx.inputs.push_back(std::move(in));
    }
    const std::uint32_t n_out = r.u32();
    for (std::uint32_t i = 0; i < n_out; ++i) {
        const std::uint64_t value = r.u64();
        const std::uint32_t arity = r.u32();
        tx.outputs.push_back(TxOut{value, Script(arity, decode_node(r))});
    }
    tx.lock_time = r.u32();
    if (!r.done()) {
        throw std::runtime_error("trailing bytes after transaction");
    }
    return tx;
}

} // namespace fusesim::test
