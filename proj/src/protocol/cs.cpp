// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/protocol/cs.hpp>

#include <utility>

namespace fusesim {

CsSession::CsSession(std::string label, ChainParams params, PartyContext* committer,
                     PartyContext* recipient, std::vector<std::uint8_t> secret,
                     Outpoint funding, OpenPolicy open_policy, Deviation committer_dev,
                     Deviation recipient_dev)
    : m_label(std::move(label)),
      m_params(params),
      m_committer(committer),
      m_recipient(recipient),
      m_committer_dev(committer_dev),
      m_recipient_dev(recipient_dev),
      m_secret(std::move(secret)),
      m_h(hash(m_secret)),
      m_funding(funding),
      m_open_policy(open_policy)
{
    m_committer->learn(m_secret);
}

void CsSession::note(Ledger& ledger, std::string detail)
{
    ledger.trace().note(ledger.current_round(), m_label, std::move(detail));
}

Script CsSession::commit_script() const
{
    // Slots: 0 committer sig, 1 recipient sig, 2 secret.
    using Node = Script::Node;
    const KeyId c = m_committer->keys.key_id;
    const KeyId r = m_recipient->keys.key_id;
    return Script(3, Node::any_of({
                         Node::all_of({Node::check_sig(c, 0), Node::check_hash(m_h, 2)}),
                         Node::all_of({Node::check_sig(c, 0), Node::check_sig(r, 1)}),
                     }));
}

void CsSession::start(Ledger& ledger)
{
    m_started = true;
    if (m_committer_dev == DeviationPoint::CsSkipCommit) {
        m_phase = Phase::Aborted;
        m_abort_reason = "skip-commit";
        note(ledger, "phase=aborted reason=skip-commit");
        return;
    }
    Transaction commit;
    commit.inputs.push_back(TxIn{m_funding, {}});
    commit.outputs.push_back(TxOut{m_params.d, commit_script()});
    m_commit_body = body_digest(commit);
    commit.inputs[0].witness = {
        WitnessItem::from_sig(sign(m_committer->keys, m_commit_body))};
    m_commit_entry = ledger.broadcast(std::move(commit), m_label + ".commit");
}

void CsSession::deliver_fuse_signature(Ledger& ledger)
{
    if (m_committer_dev == DeviationPoint::CsSkipFuseSig) return;  // never arrives
    m_fuse_sig_done = true;

    // Both sides derive the same refund body from the confirmed id; only the
    // committer's signature travels.
    const Outpoint commit_out{m_commit_confirmed->id, 0};
    const Transaction fuse =
        build_claim(commit_out, m_params.d, m_recipient->keys.key_id, m_params.t, 3);
    m_fuse_body = fuse;
    Signature sig = sign(m_committer->keys, body_digest(fuse));
    if (m_committer_dev == DeviationPoint::CsBadFuseSig) {
        sig.bytes[0] ^= 0xff;
    }

    if (verify(m_committer->keys.key_id, body_digest(fuse), sig)) {
        m_recipient_fuse_sig = std::move(sig);
        m_phase = Phase::FuseSigned;
        note(ledger, "phase=fuse-signed");
    } else {
        m_phase = Phase::Aborted;
        m_abort_reason = "bad-fuse-sig";
        note(ledger, "phase=aborted reason=bad-fuse-sig");
    }
}

void CsSession::committer_step(Ledger& ledger)
{
    // Covers the protocol's open step and the committer's self-protecting
    // open after the recipient quit: the deposit stays recoverable as long
    // as the commit output is unspent.
    if (m_committer_dev == DeviationPoint::CsSkipOpen) return;
    if (!m_commit_confirmed || m_fuse_confirmed) return;

    if (m_open_entry) {
        if (!m_open_confirmed && ledger.body_confirmed(m_open_body)) {
            m_open_confirmed = true;
            if (m_phase == Phase::FuseSigned) {
                m_phase = Phase::Opened;
                note(ledger, "phase=opened");
            } else {
                note(ledger, "open=confirmed");
            }
            m_recipient->learn(extract_secret(ledger, m_open_body, 2));
        }
        return;
    }

    const bool due = m_open_policy == OpenPolicy::AtMargin
                         ? ledger.current_round() >= open_margin(m_params)
                         : m_open_requested;
    if (!due) return;

    Transaction open =
        build_claim({m_commit_confirmed->id, 0}, m_params.d, m_committer->keys.key_id, 0, 3);
    m_open_body = body_digest(open);
    open.inputs[0].witness[0] = WitnessItem::from_sig(sign(m_committer->keys, m_open_body));
    open.inputs[0].witness[2] = WitnessItem::secret(m_secret);
    m_open_entry = ledger.broadcast(std::move(open), m_label + ".open");
}

void CsSession::recipient_step(Ledger& ledger)
{
    if (!m_recipient_fuse_sig) return;  // nothing to act with
    if (m_recipient_dev == DeviationPoint::CsSkipFuse) return;
    if (m_open_confirmed) return;

    if (m_fuse_entry) {
        if (!m_fuse_confirmed && ledger.body_confirmed(body_digest(*m_fuse_body))) {
            m_fuse_confirmed = true;
            m_phase = Phase::Fused;
            note(ledger, "phase=fused");
        }
        return;
    }
    if (ledger.current_round() < m_params.t) return;

    Transaction fuse = *m_fuse_body;
    const Digest body = body_digest(fuse);
    fuse.inputs[0].witness[0] = WitnessItem::from_sig(*m_recipient_fuse_sig);
    fuse.inputs[0].witness[1] = WitnessItem::from_sig(sign(m_recipient->keys, body));
    m_fuse_entry = ledger.broadcast(std::move(fuse), m_label + ".fuse");
}

void CsSession::run_step(Ledger& ledger)
{
    const std::uint32_t round = ledger.current_round();

    if (!m_started) {
        start(ledger);
    }

    if (m_phase == Phase::Init && m_commit_entry &&
        ledger.status(*m_commit_entry) == TxStatus::Rejected) {
        m_phase = Phase::Aborted;
        m_abort_reason = "commit-rejected";
        note(ledger, "phase=aborted reason=commit-rejected");
    }

    if (m_phase == Phase::Init && m_commit_entry) {
        if (auto conf = ledger.confirmed_by_body(m_commit_body)) {
            m_commit_confirmed = std::move(conf);
            m_phase = Phase::Committed;
            note(ledger, "phase=committed id=" + m_commit_confirmed->id.hex());
        }
    }

    if (m_phase == Phase::Committed && !m_fuse_sig_done) {
        deliver_fuse_signature(ledger);
    }

    // Recipient quits when no acceptable signature showed up in time.
    if ((m_phase == Phase::Init || m_phase == Phase::Committed) &&
        round >= open_margin(m_params)) {
        m_phase = Phase::Aborted;
        m_abort_reason = "missing-fuse-sig";
        note(ledger, "phase=aborted reason=missing-fuse-sig");
    }

    committer_step(ledger);
    recipient_step(ledger);

    const bool entries_resolved = !pending(ledger, m_commit_entry) &&
                                  !pending(ledger, m_open_entry) &&
                                  !pending(ledger, m_fuse_entry);
    m_quiescent = round >= sweep_round(m_params) && entries_resolved;
}

void CsSession::on_round(Ledger& ledger)
{
    run_step(ledger);
    if (!m_swept && ledger.current_round() == sweep_round(m_params)) {
        m_swept = true;
        if (m_committer_dev) sweep(ledger, *m_committer);
        if (m_recipient_dev) sweep(ledger, *m_recipient);
    }
}

void CsSession::request_open()
{
    m_open_requested = true;
}

bool CsSession::quiescent() const
{
    return m_quiescent;
}

std::optional<Outpoint> CsSession::confirmed_outpoint() const
{
    if (!m_commit_confirmed) return std::nullopt;
    return Outpoint{m_commit_confirmed->id, 0};
}

SessionReport CsSession::report() const
{
    SessionReport rep;
    switch (m_phase) {
    case Phase::Init: rep.terminal_phase = "init"; break;
    case Phase::Committed: rep.terminal_phase = "committed"; break;
    case Phase::FuseSigned: rep.terminal_phase = "fuse-signed"; break;
    case Phase::Opened: rep.terminal_phase = "opened"; break;
    case Phase::Fused: rep.terminal_phase = "fused"; break;
    case Phase::Aborted: rep.terminal_phase = "aborted:" + m_abort_reason; break;
    }
    // The recipient is owed the deposit once it accepted the commitment
    // (holds the refund signature) and the secret never appeared.
    rep.entitled_b = m_recipient_fuse_sig.has_value() && !m_open_confirmed;
    rep.entitled_a = false;
    return rep;
}

} // namespace fusesim
