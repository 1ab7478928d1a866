// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/protocol/scs_legacy.hpp>

#include <utility>

namespace fusesim {

ScsLegacySession::ScsLegacySession(ChainParams params, PartyContext* party_a,
                                   PartyContext* party_b, std::vector<std::uint8_t> secret_a,
                                   std::vector<std::uint8_t> secret_b, Outpoint funding_a,
                                   Outpoint funding_b, Deviation a_dev, Deviation b_dev)
    : m_params(params), m_a(party_a), m_b(party_b)
{
    m_sides[0].secret = std::move(secret_a);
    m_sides[0].h = hash(m_sides[0].secret);
    m_sides[0].dev = a_dev;
    m_sides[0].funding = funding_a;
    m_sides[1].secret = std::move(secret_b);
    m_sides[1].h = hash(m_sides[1].secret);
    m_sides[1].dev = b_dev;
    m_sides[1].funding = funding_b;
    m_a->learn(m_sides[0].secret);
    m_b->learn(m_sides[1].secret);
}

void ScsLegacySession::note(Ledger& ledger, std::string detail)
{
    ledger.trace().note(ledger.current_round(), "scs", std::move(detail));
}

PartyContext& ScsLegacySession::owner(PartyRole role) const
{
    return role == PartyRole::A ? *m_a : *m_b;
}

ScsLegacySession::Side& ScsLegacySession::side(PartyRole role)
{
    return m_sides[role == PartyRole::A ? 0 : 1];
}

const ScsLegacySession::Side& ScsLegacySession::side(PartyRole role) const
{
    return m_sides[role == PartyRole::A ? 0 : 1];
}

void ScsLegacySession::presign(Ledger& ledger)
{
    using Node = Script::Node;
    const KeyId a = m_a->keys.key_id;
    const KeyId b = m_b->keys.key_id;

    // Either side refuses to co-operate before anything is broadcast: the
    // whole protocol dies with no coins at stake.
    for (const PartyRole role : {PartyRole::A, PartyRole::B}) {
        if (side(role).dev == DeviationPoint::LegacySkipCommitSig ||
            side(role).dev == DeviationPoint::LegacySkipFuseSig) {
            m_phase = Phase::Aborted;
            note(ledger, "phase=aborted reason=" + to_string(*side(role).dev) + " by=" +
                             to_string(role));
            return;
        }
    }

    // Joint commitment: input 0 is A's funding, input 1 is B's. Each output
    // carries (owner sig AND owner secret) OR (owner sig AND counterparty
    // sig); slots 0/1/2 are A sig / B sig / secret.
    Transaction commit;
    commit.inputs.push_back(TxIn{m_sides[0].funding, {}});
    commit.inputs.push_back(TxIn{m_sides[1].funding, {}});
    commit.outputs.push_back(
        TxOut{m_params.d,
              Script(3, Node::any_of({
                            Node::all_of({Node::check_sig(a, 0), Node::check_hash(m_sides[0].h, 2)}),
                            Node::all_of({Node::check_sig(a, 0), Node::check_sig(b, 1)}),
                        }))});
    commit.outputs.push_back(
        TxOut{m_params.d,
              Script(3, Node::any_of({
                            Node::all_of({Node::check_sig(b, 1), Node::check_hash(m_sides[1].h, 2)}),
                            Node::all_of({Node::check_sig(b, 1), Node::check_sig(a, 0)}),
                        }))});
    m_commit_body = body_digest(commit);
    commit.inputs[0].witness = {WitnessItem::from_sig(sign(m_a->keys, m_commit_body))};
    commit.inputs[1].witness = {WitnessItem::from_sig(sign(m_b->keys, m_commit_body))};
    m_commit = commit;

    // Both refunds must exist before the commitment is broadcast, so they
    // can only spend the id the parties computed themselves.
    m_predicted_id = txid(m_commit);
    for (const PartyRole role : {PartyRole::A, PartyRole::B}) {
        const bool is_a = role == PartyRole::A;
        const std::uint32_t index = is_a ? 0 : 1;
        // The refund punishing this side pays the counterparty.
        const KeyId payee = is_a ? b : a;
        Transaction fuse =
            build_claim({m_predicted_id, index}, m_params.d, payee, m_params.t, 3);
        const Digest body = body_digest(fuse);
        fuse.inputs[0].witness[0] = WitnessItem::from_sig(sign(m_a->keys, body));
        fuse.inputs[0].witness[1] = WitnessItem::from_sig(sign(m_b->keys, body));
        m_fuses[index] = std::move(fuse);
    }

    m_commit_entry = ledger.broadcast(m_commit, "commit");
    note(ledger, "phase=presigned predicted=" + m_predicted_id.hex());
}

void ScsLegacySession::on_round(Ledger& ledger)
{
    const std::uint32_t round = ledger.current_round();

    if (!m_started) {
        m_started = true;
        presign(ledger);
    }

    if (m_phase == Phase::Presign && m_commit_entry) {
        if (auto conf = ledger.confirmed_by_body(m_commit_body)) {
            m_commit_confirmed = std::move(conf);
            m_phase = Phase::Committed;
            note(ledger, "phase=committed id=" + m_commit_confirmed->id.hex());
        } else if (ledger.status(*m_commit_entry) == TxStatus::Rejected ||
                   round >= open_margin(m_params)) {
            m_phase = Phase::Aborted;
            note(ledger, "phase=aborted reason=commit-failed");
        }
    }

    if (m_phase == Phase::Committed || m_phase == Phase::Opens) {
        m_phase = Phase::Opens;
        for (const PartyRole role : {PartyRole::A, PartyRole::B}) {
            Side& s = side(role);
            const bool is_a = role == PartyRole::A;
            if (s.open_entry) {
                if (!s.open_confirmed && ledger.body_confirmed(s.open_body)) {
                    s.open_confirmed = true;
                    note(ledger, "open." + to_string(role) + "=confirmed");
                    // The revealed secret is now public.
                    owner(role == PartyRole::A ? PartyRole::B : PartyRole::A)
                        .learn(extract_secret(ledger, s.open_body, 2));
                }
            } else if (s.dev != DeviationPoint::LegacySkipOpen &&
                       round >= open_margin(m_params)) {
                Transaction open = build_claim({m_commit_confirmed->id, is_a ? 0u : 1u},
                                               m_params.d, owner(role).keys.key_id, 0, 3);
                s.open_body = body_digest(open);
                open.inputs[0].witness[is_a ? 0 : 1] =
                    WitnessItem::from_sig(sign(owner(role).keys, s.open_body));
                open.inputs[0].witness[2] = WitnessItem::secret(s.secret);
                s.open_entry = ledger.broadcast(std::move(open), "open." + to_string(role));
            }
        }

        // At the deadline each party tries the pre-signed refund against the
        // side whose secret never appeared.
        if (round >= m_params.t) {
            for (const PartyRole role : {PartyRole::A, PartyRole::B}) {
                Side& s = side(role);
                const std::uint32_t index = role == PartyRole::A ? 0 : 1;
                if (s.open_confirmed || s.fuse_entry) {
                    if (s.fuse_entry && !s.fuse_confirmed) {
                        if (ledger.status(*s.fuse_entry) == TxStatus::Confirmed) {
                            s.fuse_confirmed = true;
                            note(ledger, "fuse." + to_string(role) + "=confirmed");
                        } else if (const auto err = ledger.rejection(*s.fuse_entry)) {
                            s.fuse_err = err;
                            note(ledger, "fuse." + to_string(role) + "=" + to_string(*err));
                        }
                    }
                    continue;
                }
                s.fuse_entry = ledger.broadcast(*m_fuses[index], "fuse." + to_string(role));
            }
        }

        bool all_settled = true;
        for (const auto& s : m_sides) {
            all_settled = all_settled &&
                          (s.open_confirmed || s.fuse_confirmed || s.fuse_err.has_value());
        }
        if (all_settled && round > m_params.t) {
            m_phase = Phase::Settled;
            note(ledger, "phase=settled");
        }
    }

    if (!m_swept && round == sweep_round(m_params)) {
        m_swept = true;
        if (m_sides[0].dev) sweep(ledger, *m_a);
        if (m_sides[1].dev) sweep(ledger, *m_b);
    }

    bool resolved = !pending(ledger, m_commit_entry);
    for (const auto& s : m_sides) {
        resolved = resolved && !pending(ledger, s.open_entry) && !pending(ledger, s.fuse_entry);
    }
    m_quiescent = round >= sweep_round(m_params) && resolved;
}

bool ScsLegacySession::quiescent() const
{
    return m_quiescent;
}

std::optional<Digest> ScsLegacySession::confirmed_commit_id() const
{
    if (!m_commit_confirmed) return std::nullopt;
    return m_commit_confirmed->id;
}

std::optional<ValidationError> ScsLegacySession::fuse_error(PartyRole role) const
{
    return side(role).fuse_err;
}

SessionReport ScsLegacySession::report() const
{
    SessionReport rep;
    switch (m_phase) {
    case Phase::Presign: rep.terminal_phase = "presign"; break;
    case Phase::Committed: rep.terminal_phase = "committed"; break;
    case Phase::Opens: rep.terminal_phase = "opens"; break;
    case Phase::Settled: rep.terminal_phase = "settled"; break;
    case Phase::Aborted: rep.terminal_phase = "aborted"; break;
    }
    // Once the commitment confirmed, a missing counterparty secret entitles
    // the other party to that side's deposit.
    const bool committed = m_commit_confirmed.has_value();
    rep.entitled_b = committed && !m_sides[0].open_confirmed;  // A's secret missing -> B owed
    rep.entitled_a = committed && !m_sides[1].open_confirmed;  // B's secret missing -> A owed
    return rep;
}

} // namespace fusesim
