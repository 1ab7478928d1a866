// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_PROTOCOL_NEWSCS_HPP
#define FUSESIM_PROTOCOL_NEWSCS_HPP

#include <fusesim/protocol/cs.hpp>
#include <fusesim/protocol/common.hpp>

#include <array>
#include <memory>
#include <optional>

namespace fusesim {

/** Malleability-resistant simultaneous commitment.
 *
 *  Each party first locks an auxiliary secret (r_a, r_b) under a timed
 *  commitment. The joint commitment then carries, per side, the branch
 *  (owner sig AND owner secret) OR (counterparty sig AND that side's
 *  auxiliary secret) — the counterparty's penalty path is gated by a hash
 *  preimage rather than by a co-signed time-locked refund, so every
 *  transaction spending the joint commitment can be built after it
 *  confirms, from its actual id. If the joint commitment stalls past
 *  t - 3 max_bb, a party first reclaims its own funding input and only
 *  then opens its auxiliary commitment, so a withheld co-signed
 *  commitment can never ambush it later.
 */
class NewScsSession : public ProtocolSession {
public:
    enum class Phase { CommitR, CommitS, Open, Punish, Done, Aborted };

    struct Secrets {
        std::vector<std::uint8_t> s_a;
        std::vector<std::uint8_t> s_b;
        std::vector<std::uint8_t> r_a;
        std::vector<std::uint8_t> r_b;
    };

    struct Fundings {
        Outpoint a1, a2, b1, b2;
    };

    NewScsSession(ChainParams params, PartyContext* party_a, PartyContext* party_b,
                  Secrets secrets, Fundings fundings, Deviation a_dev = std::nullopt,
                  Deviation b_dev = std::nullopt);

    void on_round(Ledger& ledger) override;
    bool quiescent() const override;
    SessionReport report() const override;

    Phase phase() const { return m_phase; }
    const CsSession& inner(PartyRole role) const;
    /** Mutable access for embedders that drive an auxiliary commitment out
     *  of band (for instance a deviator protecting its deposit while
     *  withholding the main secret). */
    CsSession& inner(PartyRole role);
    bool commit_confirmed() const { return m_commit_confirmed.has_value(); }
    std::optional<Digest> confirmed_commit_id() const;
    bool open_confirmed(PartyRole role) const { return side(role).open_confirmed; }
    Digest open_body(PartyRole role) const { return side(role).open_body; }
    Digest secret_hash(PartyRole role) const { return side(role).h_s; }
    std::string quit_reason() const { return m_quit_reason; }

private:
    struct Side {
        std::vector<std::uint8_t> s;  // main secret
        std::vector<std::uint8_t> r;  // auxiliary secret
        Digest h_s;
        Digest h_r;
        Deviation dev;
        Outpoint funding_cs;      // T1: auxiliary commitment funding
        Outpoint funding_commit;  // T2: joint commitment funding
        std::optional<std::uint64_t> open_entry;
        Digest open_body;
        bool open_confirmed = false;
        bool cs_open_signaled = false;
        std::optional<std::uint64_t> redeem_entry;
        bool redeem_confirmed = false;
        bool redeem_needed = false;
        std::optional<std::uint64_t> commit_fuse_entry;  // punish path, held by the other party
        bool commit_fuse_confirmed = false;
    };

    void note(Ledger& ledger, std::string detail);
    PartyContext& owner(PartyRole role) const;
    CsSession& cs(PartyRole role) const;
    Side& side(PartyRole role);
    const Side& side(PartyRole role) const;
    bool deviates_at(PartyRole role, DeviationPoint p) const;
    void quit(Ledger& ledger, std::string reason);
    void drive_quit_exits(Ledger& ledger);
    void open_steps(Ledger& ledger);
    void punish_steps(Ledger& ledger);
    Script side_script(PartyRole role) const;

    ChainParams m_params;
    PartyContext* m_a;
    PartyContext* m_b;
    std::array<Side, 2> m_sides;
    std::unique_ptr<CsSession> m_cs_a;  // A commits r_a to B
    std::unique_ptr<CsSession> m_cs_b;  // B commits r_b to A

    Phase m_phase = Phase::CommitR;
    bool m_quit = false;
    std::string m_quit_reason;
    bool m_quiescent = false;
    bool m_swept = false;

    Transaction m_commit;  // body; witnesses attached when co-signed
    Digest m_commit_body;
    bool m_commit_built = false;
    bool m_a_sig_sent = false;
    bool m_b_broadcast = false;
    std::optional<std::uint64_t> m_commit_entry;
    std::optional<ConfirmedTx> m_commit_confirmed;
};

} // namespace fusesim

#endif // FUSESIM_PROTOCOL_NEWSCS_HPP
