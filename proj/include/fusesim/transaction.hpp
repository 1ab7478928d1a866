// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_TRANSACTION_HPP
#define FUSESIM_TRANSACTION_HPP

#include <fusesim/crypto.hpp>
#include <fusesim/digest.hpp>
#include <fusesim/script.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fusesim {

struct Outpoint {
    Digest txid;
    std::uint32_t index = 0;

    /** Marker outpoint used by genesis inputs. Never spendable; the salt
     *  keeps otherwise identical genesis transactions distinct. */
    static Outpoint null(std::uint32_t salt) { return {Digest::zero(), salt}; }
    bool is_null() const { return txid.is_zero(); }

    auto operator<=>(const Outpoint&) const = default;
};

struct TxIn {
    Outpoint prevout;
    Witness witness;

    bool operator==(const TxIn&) const = default;
};

struct TxOut {
    std::uint64_t value = 0;
    Script script;

    bool operator==(const TxOut&) const = default;
};

/** A transaction has two digests: `txid` hashes the full encoding including
 *  witnesses, so any witness change gives a fresh id; `body_digest` hashes
 *  the witness-stripped encoding and is what signatures cover. The distance
 *  between the two is the malleability gap this library models. */
struct Transaction {
    std::vector<TxIn> inputs;
    std::vector<TxOut> outputs;
    std::uint32_t lock_time = 0;  // earliest round at which inclusion is valid; 0 = none

    bool operator==(const Transaction&) const = default;
};

/** Canonical injective encoding. Field order is inputs, outputs, lock_time;
 *  every list and every variable-length field carries a 32-bit little-endian
 *  length prefix; scalars are little-endian (u32 counts/slots/lock_time,
 *  u64 values). With include_witnesses=false each witness list is encoded
 *  as the empty list. */
std::vector<std::uint8_t> encode(const Transaction& tx, bool include_witnesses);

Digest txid(const Transaction& tx);
Digest body_digest(const Transaction& tx);

struct EmptyPadding : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/** Returns tx with Pad(padding) appended to the witness of input 0: the
 *  body digest and every script evaluation result are unchanged, the txid
 *  is not. Throws EmptyPadding on an empty padding string. */
Transaction malleate(const Transaction& tx, std::span<const std::uint8_t> padding);
Transaction malleate(const Transaction& tx, std::string_view padding);

/** Audit hook for txid computations.
 *
 *  Protocol code must never derive the id of a transaction it has not
 *  itself just built for broadcast; ids of other parties' transactions are
 *  only trustworthy once read back from the ledger. Infrastructure that
 *  legitimately hashes full transactions (inclusion processing, the network
 *  adversary) runs under a Sanction scope. Tests install an observer and
 *  flag every unsanctioned txid() call; the only expected hits are the
 *  deliberately vulnerable legacy flows that predict ids before broadcast.
 */
namespace txid_audit {

using Observer = std::function<void(const Transaction&)>;

void set_observer(Observer observer);  // pass nullptr to clear
bool sanctioned();

struct Sanction {
    Sanction();
    ~Sanction();
    Sanction(const Sanction&) = delete;
    Sanction& operator=(const Sanction&) = delete;
};

} // namespace txid_audit

} // namespace fusesim

#endif // FUSESIM_TRANSACTION_HPP
