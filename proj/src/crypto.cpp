// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/crypto.hpp>

#include "sha256.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

namespace fusesim {

namespace {

// Domain separation tags keep key material, ids and signatures in disjoint
// hash domains.
constexpr std::string_view PRIV_TAG = "fusesim.key.priv|";
constexpr std::string_view PUB_TAG = "fusesim.key.pub|";
constexpr std::string_view ID_TAG = "fusesim.key.id|";
constexpr std::string_view SIG_TAG = "fusesim.sig|";

void append(std::vector<std::uint8_t>& buf, std::span<const std::uint8_t> data)
{
    buf.insert(buf.end(), data.begin(), data.end());
}

Digest tagged_hash(std::string_view tag, std::span<const std::uint8_t> data)
{
    std::vector<std::uint8_t> buf;
    buf.reserve(tag.size() + data.size());
    append(buf, as_bytes(tag));
    append(buf, data);
    return hash(buf);
}

// Directory of every key pair seen by this process. Verification consults
// it to recompute the expected signature bytes. Inserts are idempotent
// (derivation is deterministic), reads are concurrent.
struct KeyDirectory {
    std::shared_mutex mutex;
    std::map<Digest, Digest> priv_by_pub;
    std::map<KeyId, Digest> pub_by_id;

    static KeyDirectory& instance()
    {
        static KeyDirectory dir;
        return dir;
    }
};

Digest signature_digest(const Digest& private_part, const Digest& digest)
{
    std::vector<std::uint8_t> buf;
    buf.reserve(SIG_TAG.size() + 64);
    append(buf, as_bytes(SIG_TAG));
    append(buf, private_part.bytes);
    append(buf, digest.bytes);
    return hash(buf);
}

} // namespace

std::string Digest::hex() const
{
    static constexpr char alphabet[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (const auto b : bytes) {
        out.push_back(alphabet[b >> 4]);
        out.push_back(alphabet[b & 0x0f]);
    }
    return out;
}

bool Digest::is_zero() const
{
    for (const auto b : bytes) {
        if (b != 0) return false;
    }
    return true;
}

std::optional<Digest> Digest::from_hex(std::string_view hex)
{
    if (hex.size() != 64) return std::nullopt;
    const auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Digest out;
    for (std::size_t i = 0; i < 32; ++i) {
        const int hi = nibble(hex[2 * i]);
        const int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.bytes[i] = std::uint8_t((hi << 4) | lo);
    }
    return out;
}

Digest hash(std::span<const std::uint8_t> data)
{
    return Digest{detail::sha256(data)};
}

Digest hash(std::string_view data)
{
    return hash(as_bytes(data));
}

KeyPair keygen(std::uint64_t seed, std::string_view label)
{
    std::vector<std::uint8_t> material;
    material.reserve(8 + label.size());
    for (int i = 0; i < 8; ++i) {
        material.push_back(std::uint8_t(seed >> (8 * i)));
    }
    append(material, as_bytes(label));

    KeyPair kp;
    kp.private_part = tagged_hash(PRIV_TAG, material);
    kp.public_part = tagged_hash(PUB_TAG, kp.private_part.bytes);
    kp.key_id = KeyId{tagged_hash(ID_TAG, kp.public_part.bytes)};

    auto& dir = KeyDirectory::instance();
    std::unique_lock lock(dir.mutex);
    dir.priv_by_pub.emplace(kp.public_part, kp.private_part);
    dir.pub_by_id.emplace(kp.key_id, kp.public_part);
    return kp;
}

Signature sign(const Digest& private_part, const Digest& digest)
{
    const Digest pub = tagged_hash(PUB_TAG, private_part.bytes);
    const KeyId id{tagged_hash(ID_TAG, pub.bytes)};
    const Digest sig = signature_digest(private_part, digest);
    return Signature{{sig.bytes.begin(), sig.bytes.end()}, id};
}

Signature sign(const KeyPair& key, const Digest& digest)
{
    return sign(key.private_part, digest);
}

bool verify(const Digest& public_part, const Digest& digest, const Signature& sig)
{
    if (sig.bytes.size() != 32) return false;

    Digest priv;
    {
        auto& dir = KeyDirectory::instance();
        std::shared_lock lock(dir.mutex);
        const auto it = dir.priv_by_pub.find(public_part);
        if (it == dir.priv_by_pub.end()) return false;
        priv = it->second;
    }

    const Digest expected = signature_digest(priv, digest);
    return std::equal(expected.bytes.begin(), expected.bytes.end(), sig.bytes.begin());
}

bool verify(const KeyId& key, const Digest& digest, const Signature& sig)
{
    const auto pub = lookup_public(key);
    if (!pub) return false;
    return verify(*pub, digest, sig);
}

std::optional<Digest> lookup_public(const KeyId& key)
{
    auto& dir = KeyDirectory::instance();
    std::shared_lock lock(dir.mutex);
    const auto it = dir.pub_by_id.find(key);
    if (it == dir.pub_by_id.end()) return std::nullopt;
    return it->second;
}

} // namespace fusesim
