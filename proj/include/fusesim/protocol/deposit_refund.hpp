// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_PROTOCOL_DEPOSIT_REFUND_HPP
#define FUSESIM_PROTOCOL_DEPOSIT_REFUND_HPP

#include <fusesim/protocol/cs.hpp>
#include <fusesim/protocol/common.hpp>

#include <memory>
#include <optional>

namespace fusesim {

/** Deposit whose refund is gated by a secret under a timed commitment
 *  instead of a co-signed time-locked transaction.
 *
 *  B first commits to a fresh secret r (timed commitment, deadline t).
 *  Only then does A broadcast the deposit, claimable by (A's sig AND
 *  preimage of H(r)) or by the caller-supplied extra branch. A builds and
 *  signs the refund alone once the deposit has confirmed, so no id has to
 *  be predicted: if B opens, r becomes public and A refunds directly; if B
 *  never opens, A is compensated from B's commitment deposit instead.
 */
class DepositRefundSession : public ProtocolSession {
public:
    enum class Phase { CsCommit, Deposited, Armed, Refunded, Compensated, Aborted };

    /** extra_branch: additional spending condition for the deposit over
     *  slots (0: A sig, 1: B sig, 2: secret); defaults to the joint
     *  two-signature branch. */
    DepositRefundSession(ChainParams params, PartyContext* party_a, PartyContext* party_b,
                         std::vector<std::uint8_t> secret_r, Outpoint deposit_funding,
                         Outpoint cs_funding, Deviation a_dev = std::nullopt,
                         Deviation b_dev = std::nullopt,
                         std::optional<Script::Node> extra_branch = std::nullopt);

    void on_round(Ledger& ledger) override;
    bool quiescent() const override;
    SessionReport report() const override;

    Phase phase() const { return m_phase; }
    const CsSession& inner() const { return *m_cs; }
    bool refunded_via_fuse() const { return m_phase == Phase::Refunded; }
    bool compensated_via_cs() const { return m_phase == Phase::Compensated; }

private:
    void note(Ledger& ledger, std::string detail);

    ChainParams m_params;
    PartyContext* m_a;
    PartyContext* m_b;
    Deviation m_a_dev;
    Deviation m_b_dev;
    Digest m_h_r;
    Outpoint m_deposit_funding;
    Script::Node m_extra_branch;

    std::unique_ptr<CsSession> m_cs;  // B commits r to A
    Phase m_phase = Phase::CsCommit;
    bool m_quiescent = false;
    bool m_swept = false;

    Digest m_deposit_body;
    std::optional<std::uint64_t> m_deposit_entry;
    std::optional<ConfirmedTx> m_deposit_confirmed;

    std::optional<Transaction> m_fuse_body;
    std::optional<std::uint64_t> m_fuse_entry;
};

/** Outcome of the contrasting legacy pattern: refund co-signed over the
 *  predicted deposit id before broadcast. */
struct LegacyFuseOutcome {
    bool refund_confirmed = false;
    std::optional<ValidationError> fuse_error;  // UnknownInput under malleation
    bool required_cooperation = false;          // counterparty re-signed after the failure
    Digest predicted_deposit_id;
    Digest confirmed_deposit_id;
    std::uint32_t refund_round = 0;
};

/** Runs the vulnerable deposit/refund pattern to completion, driving the
 *  ledger itself: the refund is built and co-signed from the predicted
 *  deposit id before the deposit is broadcast. With
 *  `cooperate_after_failure`, the counterparty agrees to re-sign a
 *  replacement refund over the confirmed id after the original is rejected
 *  — recovery then works, but only with the counterparty's help. */
LegacyFuseOutcome legacy_fuse_flow(Ledger& ledger, PartyContext& party_a,
                                   PartyContext& party_b, Outpoint deposit_funding,
                                   std::optional<Script::Node> extra_branch = std::nullopt,
                                   bool cooperate_after_failure = false);

} // namespace fusesim

#endif // FUSESIM_PROTOCOL_DEPOSIT_REFUND_HPP
