// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_SRC_SHA256_HPP
#define FUSESIM_SRC_SHA256_HPP

#include <array>
#include <cstdint>
#include <span>

namespace fusesim::detail {

/** FIPS 180-4 SHA-256, single-shot. */
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

} // namespace fusesim::detail

#endif // FUSESIM_SRC_SHA256_HPP
