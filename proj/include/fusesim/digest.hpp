// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_DIGEST_HPP
#define FUSESIM_DIGEST_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace fusesim {

/** A 256-bit digest. Equality is byte equality; ordering is lexicographic. */
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    static Digest zero() { return Digest{}; }
    static std::optional<Digest> from_hex(std::string_view hex);

    /** Lowercase hex, 64 characters. This is the rendering used in traces. */
    std::string hex() const;

    bool is_zero() const;

    auto operator<=>(const Digest&) const = default;
};

inline std::span<const std::uint8_t> as_bytes(std::string_view s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

} // namespace fusesim

#endif // FUSESIM_DIGEST_HPP
