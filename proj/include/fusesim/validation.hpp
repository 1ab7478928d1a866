// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_VALIDATION_HPP
#define FUSESIM_VALIDATION_HPP

#include <fusesim/transaction.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace fusesim {

struct UtxoEntry {
    std::uint64_t value = 0;
    Script script;
    std::optional<KeyId> owner;  // hint, set for plain pay-to-key outputs
};

/** Read-only view of chain state as validation needs it. `ever_existed`
 *  distinguishes an outpoint that was spent from one that never existed. */
class UtxoView {
public:
    virtual ~UtxoView() = default;
    virtual const UtxoEntry* find_unspent(const Outpoint& out) const = 0;
    virtual bool ever_existed(const Outpoint& out) const = 0;
};

struct ValidationError {
    enum class Kind {
        UnknownInput,
        AlreadySpent,
        MalformedWitness,
        ScriptFailed,
        LockTimeNotReached,
        ValueMismatch,
    };

    Kind kind;
    std::uint32_t input_index = 0;  // meaningful for the per-input kinds

    bool operator==(const ValidationError&) const = default;
};

std::string to_string(ValidationError::Kind kind);
std::string to_string(const ValidationError& err);

/** Stateless validation against a UTXO view at a given round. Checks run
 *  in a fixed order and the first failure wins: UnknownInput, AlreadySpent,
 *  MalformedWitness, ScriptFailed, ValueMismatch, LockTimeNotReached.
 *  Inputs must conserve value exactly; there are no fees. Returns nullopt
 *  when the transaction is acceptable. */
std::optional<ValidationError> validate(const Transaction& tx, const UtxoView& utxo,
                                        std::uint32_t current_round);

/** Map-backed view for tests and ad-hoc use. */
class MapUtxoView : public UtxoView {
public:
    void add(const Outpoint& out, UtxoEntry entry);
    void remove(const Outpoint& out);  // marks spent, keeps existence

    const UtxoEntry* find_unspent(const Outpoint& out) const override;
    bool ever_existed(const Outpoint& out) const override;

private:
    std::map<Outpoint, UtxoEntry> m_live;
    std::map<Outpoint, bool> m_known;
};

} // namespace fusesim

#endif // FUSESIM_VALIDATION_HPP
