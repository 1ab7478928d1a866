// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_PROTOCOL_SCS_LEGACY_HPP
#define FUSESIM_PROTOCOL_SCS_LEGACY_HPP

#include <fusesim/protocol/common.hpp>

#include <array>
#include <optional>

namespace fusesim {

/** The original simultaneous commitment: one two-input, two-output
 *  commitment transaction, with the penalty refunds co-signed over its
 *  predicted id before it is broadcast. The prediction is the protocol's
 *  defect: a malleated commitment confirms under a different id and both
 *  refunds die with UnknownInput, leaving the honest party unable to
 *  collect its penalty. Kept for contrast and for the attack search. */
class ScsLegacySession : public ProtocolSession {
public:
    enum class Phase { Presign, Committed, Opens, Settled, Aborted };

    ScsLegacySession(ChainParams params, PartyContext* party_a, PartyContext* party_b,
                     std::vector<std::uint8_t> secret_a, std::vector<std::uint8_t> secret_b,
                     Outpoint funding_a, Outpoint funding_b, Deviation a_dev = std::nullopt,
                     Deviation b_dev = std::nullopt);

    void on_round(Ledger& ledger) override;
    bool quiescent() const override;
    SessionReport report() const override;

    Phase phase() const { return m_phase; }
    Digest predicted_commit_id() const { return m_predicted_id; }
    std::optional<Digest> confirmed_commit_id() const;
    /** Rejection observed for the pre-signed refund punishing the given
     *  side's owner. */
    std::optional<ValidationError> fuse_error(PartyRole side) const;

private:
    struct Side {
        std::vector<std::uint8_t> secret;
        Digest h;
        Deviation dev;
        bool open_confirmed = false;
        std::optional<std::uint64_t> open_entry;
        Digest open_body;
        std::optional<std::uint64_t> fuse_entry;  // broadcast by the other party
        std::optional<ValidationError> fuse_err;
        bool fuse_confirmed = false;
        Outpoint funding;
    };

    void note(Ledger& ledger, std::string detail);
    void presign(Ledger& ledger);
    PartyContext& owner(PartyRole role) const;
    Side& side(PartyRole role);
    const Side& side(PartyRole role) const;

    ChainParams m_params;
    PartyContext* m_a;
    PartyContext* m_b;
    std::array<Side, 2> m_sides;

    Phase m_phase = Phase::Presign;
    bool m_started = false;
    bool m_quiescent = false;
    bool m_swept = false;
    Transaction m_commit;  // fully witnessed, as co-signed
    Digest m_commit_body;
    Digest m_predicted_id;
    std::array<std::optional<Transaction>, 2> m_fuses;  // pre-signed, spend the predicted id
    std::optional<std::uint64_t> m_commit_entry;
    std::optional<ConfirmedTx> m_commit_confirmed;
};

} // namespace fusesim

#endif // FUSESIM_PROTOCOL_SCS_LEGACY_HPP
