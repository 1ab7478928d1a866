// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/protocol/newscs.hpp>

#include <utility>

namespace fusesim {

NewScsSession::NewScsSession(ChainParams params, PartyContext* party_a, PartyContext* party_b,
                             Secrets secrets, Fundings fundings, Deviation a_dev,
                             Deviation b_dev)
    : m_params(params), m_a(party_a), m_b(party_b)
{
    m_sides[0].s = std::move(secrets.s_a);
    m_sides[0].r = std::move(secrets.r_a);
    m_sides[0].dev = a_dev;
    m_sides[0].funding_cs = fundings.a1;
    m_sides[0].funding_commit = fundings.a2;
    m_sides[1].s = std::move(secrets.s_b);
    m_sides[1].r = std::move(secrets.r_b);
    m_sides[1].dev = b_dev;
    m_sides[1].funding_cs = fundings.b1;
    m_sides[1].funding_commit = fundings.b2;
    for (auto& s : m_sides) {
        s.h_s = hash(s.s);
        s.h_r = hash(s.r);
    }
    m_a->learn(m_sides[0].s);
    m_b->learn(m_sides[1].s);

    // Auxiliary commitments: each party commits its r to the other; they
    // open only on this session's signal (own main secret safely revealed,
    // or a defensive exit).
    m_cs_a = std::make_unique<CsSession>("newscs.cs_a", m_params, m_a, m_b, m_sides[0].r,
                                         fundings.a1, CsSession::OpenPolicy::OnSignal,
                                         to_cs_point(a_dev), std::nullopt);
    m_cs_b = std::make_unique<CsSession>("newscs.cs_b", m_params, m_b, m_a, m_sides[1].r,
                                         fundings.b1, CsSession::OpenPolicy::OnSignal,
                                         to_cs_point(b_dev), std::nullopt);
}

void NewScsSession::note(Ledger& ledger, std::string detail)
{
    ledger.trace().note(ledger.current_round(), "newscs", std::move(detail));
}

PartyContext& NewScsSession::owner(PartyRole role) const
{
    return role == PartyRole::A ? *m_a : *m_b;
}

CsSession& NewScsSession::cs(PartyRole role) const
{
    return role == PartyRole::A ? *m_cs_a : *m_cs_b;
}

NewScsSession::Side& NewScsSession::side(PartyRole role)
{
    return m_sides[role == PartyRole::A ? 0 : 1];
}

const NewScsSession::Side& NewScsSession::side(PartyRole role) const
{
    return m_sides[role == PartyRole::A ? 0 : 1];
}

bool NewScsSession::deviates_at(PartyRole role, DeviationPoint p) const
{
    return side(role).dev == p;
}

const CsSession& NewScsSession::inner(PartyRole role) const
{
    return cs(role);
}

CsSession& NewScsSession::inner(PartyRole role)
{
    return cs(role);
}

Script NewScsSession::side_script(PartyRole role) const
{
    // (owner sig AND owner secret) OR (counterparty sig AND this side's
    // auxiliary secret); slots: 0 signature, 1 preimage.
    using Node = Script::Node;
    const Side& s = side(role);
    const KeyId self = owner(role).keys.key_id;
    const KeyId other =
        owner(role == PartyRole::A ? PartyRole::B : PartyRole::A).keys.key_id;
    return Script(2, Node::any_of({
                         Node::all_of({Node::check_sig(self, 0), Node::check_hash(s.h_s, 1)}),
                         Node::all_of({Node::check_sig(other, 0), Node::check_hash(s.h_r, 1)}),
                     }));
}

void NewScsSession::quit(Ledger& ledger, std::string reason)
{
    if (m_quit) return;
    m_quit = true;
    m_quit_reason = reason;
    m_phase = Phase::Aborted;
    note(ledger, "phase=aborted reason=" + reason);

    // A party whose signature is out in the wild must reclaim its funding
    // input before revealing anything; the other can exit directly.
    m_sides[0].redeem_needed = m_a_sig_sent && !m_commit_confirmed;
    m_sides[1].redeem_needed = m_b_broadcast && !m_commit_confirmed;
}

void NewScsSession::drive_quit_exits(Ledger& ledger)
{
    for (const PartyRole role : {PartyRole::A, PartyRole::B}) {
        Side& s = side(role);
        if (s.redeem_needed && !s.redeem_confirmed) {
            if (!s.redeem_entry) {
                Transaction redeem =
                    build_claim(s.funding_commit, m_params.d, owner(role).keys.key_id, 0, 1);
                const Digest body = body_digest(redeem);
                redeem.inputs[0].witness[0] =
                    WitnessItem::from_sig(sign(owner(role).keys, body));
                s.redeem_entry =
                    ledger.broadcast(std::move(redeem), "redeem." + to_string(role));
            } else if (ledger.status(*s.redeem_entry) == TxStatus::Confirmed) {
                s.redeem_confirmed = true;
            } else if (ledger.status(*s.redeem_entry) == TxStatus::Rejected) {
                // Lost the race against the commitment itself; the protocol
                // is live after all and the commitment handling resumes.
                s.redeem_needed = false;
            }
        }
        if ((!s.redeem_needed || s.redeem_confirmed) && !s.cs_open_signaled) {
            s.cs_open_signaled = true;
            cs(role).request_open();
        }
    }
}

void NewScsSession::open_steps(Ledger& ledger)
{
    const std::uint32_t round = ledger.current_round();
    for (const PartyRole role : {PartyRole::A, PartyRole::B}) {
        Side& s = side(role);
        const PartyRole other = role == PartyRole::A ? PartyRole::B : PartyRole::A;
        const std::uint32_t index = role == PartyRole::A ? 0 : 1;

        if (s.open_entry) {
            if (!s.open_confirmed && ledger.body_confirmed(s.open_body)) {
                s.open_confirmed = true;
                note(ledger, "open." + to_string(role) + "=confirmed");
                owner(other).learn(extract_secret(ledger, s.open_body, 1));
                // Own reveal is safely on chain; the auxiliary commitment
                // may open without arming the counterparty's punish path.
                if (!s.cs_open_signaled) {
                    s.cs_open_signaled = true;
                    cs(role).request_open();
                }
            }
        } else if (!deviates_at(role, DeviationPoint::NewScsSkipOpen) &&
                   round >= open_margin(m_params)) {
            Transaction open = build_claim({m_commit_confirmed->id, index}, m_params.d,
                                           owner(role).keys.key_id, 0, 2);
            s.open_body = body_digest(open);
            open.inputs[0].witness[0] =
                WitnessItem::from_sig(sign(owner(role).keys, s.open_body));
            open.inputs[0].witness[1] = WitnessItem::secret(s.s);
            s.open_entry = ledger.broadcast(std::move(open), "open." + to_string(role));
        }
    }
}

void NewScsSession::punish_steps(Ledger& ledger)
{
    if (ledger.current_round() < m_params.t) return;
    if (m_phase == Phase::Open) {
        m_phase = Phase::Punish;
        note(ledger, "phase=punish");
    }

    // The auxiliary commitments punish unopened secrets on their own; here
    // the wronged party additionally takes the commitment output of a side
    // whose auxiliary secret it extracted.
    for (const PartyRole role : {PartyRole::A, PartyRole::B}) {
        Side& s = side(role);
        const PartyRole other = role == PartyRole::A ? PartyRole::B : PartyRole::A;
        const std::uint32_t index = role == PartyRole::A ? 0 : 1;
        if (s.open_confirmed) continue;

        if (s.commit_fuse_entry) {
            if (!s.commit_fuse_confirmed &&
                ledger.status(*s.commit_fuse_entry) == TxStatus::Confirmed) {
                s.commit_fuse_confirmed = true;
                note(ledger, "fuse." + to_string(role) + "=confirmed");
            }
            continue;
        }
        PartyContext& claimant = owner(other);
        if (!claimant.knows(s.h_r)) continue;  // auxiliary secret never surfaced
        Transaction fuse = build_claim({m_commit_confirmed->id, index}, m_params.d,
                                       claimant.keys.key_id, 0, 2);
        const Digest body = body_digest(fuse);
        fuse.inputs[0].witness[0] = WitnessItem::from_sig(sign(claimant.keys, body));
        fuse.inputs[0].witness[1] = WitnessItem::secret(claimant.known_secrets.at(s.h_r));
        s.commit_fuse_entry = ledger.broadcast(std::move(fuse), "fuse." + to_string(role));
    }
}

void NewScsSession::on_round(Ledger& ledger)
{
    const std::uint32_t round = ledger.current_round();
    m_cs_a->run_step(ledger);
    m_cs_b->run_step(ledger);

    if (m_phase == Phase::CommitR) {
        if (m_cs_a->phase() == CsSession::Phase::Aborted ||
            m_cs_b->phase() == CsSession::Phase::Aborted) {
            quit(ledger, "cs-commit-failed");
        } else if (m_cs_a->phase() == CsSession::Phase::FuseSigned &&
                   m_cs_b->phase() == CsSession::Phase::FuseSigned) {
            m_phase = Phase::CommitS;
            note(ledger, "phase=commit-s");
        } else if (round >= open_margin(m_params)) {
            quit(ledger, "commit-r-timeout");
        }
    }

    if (m_phase == Phase::CommitS) {
        if (!m_commit_built) {
            m_commit_built = true;
            Transaction commit;
            commit.inputs.push_back(TxIn{m_sides[0].funding_commit, {}});
            commit.inputs.push_back(TxIn{m_sides[1].funding_commit, {}});
            commit.outputs.push_back(TxOut{m_params.d, side_script(PartyRole::A)});
            commit.outputs.push_back(TxOut{m_params.d, side_script(PartyRole::B)});
            m_commit = std::move(commit);
            m_commit_body = body_digest(m_commit);
        }
        if (!m_a_sig_sent && !deviates_at(PartyRole::A, DeviationPoint::NewScsSkipCommitSig)) {
            m_a_sig_sent = true;  // A's in-script signature travels to B
        }
        if (m_a_sig_sent && !m_b_broadcast &&
            !deviates_at(PartyRole::B, DeviationPoint::NewScsSkipCommitSig)) {
            Transaction commit = m_commit;
            commit.inputs[0].witness = {
                WitnessItem::from_sig(sign(m_a->keys, m_commit_body))};
            commit.inputs[1].witness = {
                WitnessItem::from_sig(sign(m_b->keys, m_commit_body))};
            m_commit_entry = ledger.broadcast(std::move(commit), "commit");
            m_b_broadcast = true;
        }

        if (auto conf = ledger.confirmed_by_body(m_commit_body)) {
            m_commit_confirmed = std::move(conf);
            m_phase = Phase::Open;
            note(ledger, "phase=open id=" + m_commit_confirmed->id.hex());
        } else if (m_commit_entry &&
                   ledger.status(*m_commit_entry) == TxStatus::Rejected) {
            quit(ledger, "commit-rejected");
        } else if (round >= open_margin(m_params)) {
            quit(ledger, "commit-timeout");
        }
    }

    if (m_phase == Phase::Open || m_phase == Phase::Punish) {
        // A commitment that surfaces after a quit was resolved in
        // drive_quit_exits by the redeem race; from here the two paths are
        // exclusive.
        open_steps(ledger);
        punish_steps(ledger);

        const bool sides_spent =
            ledger.find_unspent({m_commit_confirmed->id, 0}) == nullptr &&
            ledger.find_unspent({m_commit_confirmed->id, 1}) == nullptr;
        const auto settled = [](const CsSession& cs) {
            return cs.phase() == CsSession::Phase::Opened ||
                   cs.phase() == CsSession::Phase::Fused;
        };
        if (sides_spent && settled(*m_cs_a) && settled(*m_cs_b)) {
            m_phase = Phase::Done;
            note(ledger, "phase=done");
        }
    }

    if (m_quit) {
        drive_quit_exits(ledger);
        // The commitment may still confirm while a redeem is pending; if it
        // does, the session resumes its main path.
        if (!m_commit_confirmed) {
            if (auto conf = ledger.confirmed_by_body(m_commit_body)) {
                m_commit_confirmed = std::move(conf);
                m_quit = false;
                m_phase = Phase::Open;
                note(ledger, "phase=open id=" + m_commit_confirmed->id.hex() +
                                 " resumed=after-quit");
            }
        }
    }

    if (!m_swept && round == sweep_round(m_params)) {
        m_swept = true;
        if (m_sides[0].dev) sweep(ledger, *m_a);
        if (m_sides[1].dev) sweep(ledger, *m_b);
    }

    bool resolved = !pending(ledger, m_commit_entry);
    for (const auto& s : m_sides) {
        resolved = resolved && !pending(ledger, s.open_entry) &&
                   !pending(ledger, s.redeem_entry) && !pending(ledger, s.commit_fuse_entry);
    }
    m_quiescent = round >= sweep_round(m_params) && resolved && m_cs_a->quiescent() &&
                  m_cs_b->quiescent();
}

bool NewScsSession::quiescent() const
{
    return m_quiescent;
}

std::optional<Digest> NewScsSession::confirmed_commit_id() const
{
    if (!m_commit_confirmed) return std::nullopt;
    return m_commit_confirmed->id;
}

SessionReport NewScsSession::report() const
{
    SessionReport rep;
    switch (m_phase) {
    case Phase::CommitR: rep.terminal_phase = "commit-r"; break;
    case Phase::CommitS: rep.terminal_phase = "commit-s"; break;
    case Phase::Open: rep.terminal_phase = "open"; break;
    case Phase::Punish: rep.terminal_phase = "punish"; break;
    case Phase::Done: rep.terminal_phase = "done"; break;
    case Phase::Aborted: rep.terminal_phase = "aborted:" + m_quit_reason; break;
    }
    // After the joint commitment confirms, a side that withholds its main
    // secret or keeps its auxiliary commitment closed owes the counterparty
    // the penalty.
    const bool committed = m_commit_confirmed.has_value();
    const bool a_failed =
        committed && (!m_sides[0].open_confirmed || !m_cs_a->open_confirmed());
    const bool b_failed =
        committed && (!m_sides[1].open_confirmed || !m_cs_b->open_confirmed());
    rep.entitled_b = a_failed;
    rep.entitled_a = b_failed;
    return rep;
}

} // namespace fusesim
