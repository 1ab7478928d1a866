// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_CRYPTO_HPP
#define FUSESIM_CRYPTO_HPP

#include <fusesim/digest.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fusesim {

/** SHA-256 of an octet string. One hash is used everywhere: txids, body
 *  digests, commitment hashes and the simulated signature scheme. */
Digest hash(std::span<const std::uint8_t> data);
Digest hash(std::string_view data);

/** Opaque key identifier, stable for the lifetime of a process. */
struct KeyId {
    Digest value;

    std::string hex() const { return value.hex(); }
    auto operator<=>(const KeyId&) const = default;
};

struct KeyPair {
    KeyId key_id;
    Digest public_part;
    Digest private_part;
};

/** Signature under the simulated scheme: a MAC-style digest over
 *  (private key, message digest), tagged with the signing key id. */
struct Signature {
    std::vector<std::uint8_t> bytes;
    KeyId signer;

    bool operator==(const Signature&) const = default;
};

/** Deterministic key derivation: identical (seed, label) pairs yield
 *  identical key pairs, distinct labels or seeds yield distinct key ids.
 *  The pair is recorded in a process-wide directory so that verification
 *  can recompute signatures; the directory is append-only and safe for
 *  concurrent readers. */
KeyPair keygen(std::uint64_t seed, std::string_view label);

/** Signs a message digest. Deterministic: no nonces, no randomness.
 *  Signatures never cover witness bytes; callers are expected to pass a
 *  transaction body digest. */
Signature sign(const Digest& private_part, const Digest& digest);
Signature sign(const KeyPair& key, const Digest& digest);

/** True iff sig was produced by the private counterpart of public_part over
 *  exactly this digest. Malformed signature bytes yield false, never throw. */
bool verify(const Digest& public_part, const Digest& digest, const Signature& sig);

/** Key-id flavoured verification used by the script engine. Unknown ids
 *  verify as false. */
bool verify(const KeyId& key, const Digest& digest, const Signature& sig);

std::optional<Digest> lookup_public(const KeyId& key);

} // namespace fusesim

#endif // FUSESIM_CRYPTO_HPP
