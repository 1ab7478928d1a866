// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_PROTOCOL_CS_HPP
#define FUSESIM_PROTOCOL_CS_HPP

#include <fusesim/protocol/common.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fusesim {

/** Timed commitment session.
 *
 *  The committer locks d coins behind (own sig AND preimage of h) OR
 *  (own sig AND recipient sig), then — only after the commitment has
 *  confirmed and its actual id is known — builds the time-locked refund
 *  body, signs it and hands the signature to the recipient. Opening before
 *  round t reveals the secret and returns the deposit; otherwise the
 *  recipient completes the refund at t and takes the deposit. Because the
 *  refund spends the confirmed id, substituting a malleated commitment on
 *  the wire does not disturb the session.
 */
class CsSession : public ProtocolSession {
public:
    enum class Phase { Init, Committed, FuseSigned, Opened, Fused, Aborted };

    /** When the committer reveals: autonomously at the open margin, or only
     *  once the embedding protocol signals. */
    enum class OpenPolicy { AtMargin, OnSignal };

    /** Deviations are in this protocol's own domain (the CsSkip / CsBad
     *  points); embedding protocols translate theirs with to_cs_point(). */
    CsSession(std::string label, ChainParams params, PartyContext* committer,
              PartyContext* recipient, std::vector<std::uint8_t> secret, Outpoint funding,
              OpenPolicy open_policy, Deviation committer_dev = std::nullopt,
              Deviation recipient_dev = std::nullopt);

    void on_round(Ledger& ledger) override;
    bool quiescent() const override;
    SessionReport report() const override;

    /** Embedding protocols drive these instead of the round loop. */
    void request_open();
    void run_step(Ledger& ledger);  // same as on_round but without the sweep

    Phase phase() const { return m_phase; }
    bool started() const { return m_started; }
    bool commit_confirmed() const { return m_commit_confirmed.has_value(); }
    bool open_confirmed() const { return m_open_confirmed; }
    const Digest& commitment_hash() const { return m_h; }
    const Digest& commit_body() const { return m_commit_body; }
    std::optional<Outpoint> confirmed_outpoint() const;
    const std::optional<Transaction>& fuse_body() const { return m_fuse_body; }
    std::string abort_reason() const { return m_abort_reason; }

private:
    void start(Ledger& ledger);
    void deliver_fuse_signature(Ledger& ledger);
    void committer_step(Ledger& ledger);
    void recipient_step(Ledger& ledger);
    void note(Ledger& ledger, std::string detail);
    Script commit_script() const;

    std::string m_label;
    ChainParams m_params;
    PartyContext* m_committer;
    PartyContext* m_recipient;
    Deviation m_committer_dev;
    Deviation m_recipient_dev;
    std::vector<std::uint8_t> m_secret;
    Digest m_h;
    Outpoint m_funding;
    OpenPolicy m_open_policy;

    Phase m_phase = Phase::Init;
    bool m_started = false;
    bool m_open_requested = false;
    bool m_quiescent = false;
    bool m_swept = false;
    std::string m_abort_reason;

    Digest m_commit_body;
    std::optional<std::uint64_t> m_commit_entry;
    std::optional<ConfirmedTx> m_commit_confirmed;

    std::optional<Transaction> m_fuse_body;
    std::optional<Signature> m_recipient_fuse_sig;  // committer's, held by recipient
    bool m_fuse_sig_done = false;

    std::optional<std::uint64_t> m_open_entry;
    Digest m_open_body;
    bool m_open_confirmed = false;
    std::optional<std::uint64_t> m_fuse_entry;
    bool m_fuse_confirmed = false;
};

} // namespace fusesim

#endif // FUSESIM_PROTOCOL_CS_HPP
