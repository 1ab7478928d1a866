// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/protocol/deposit_refund.hpp>

#include <utility>

namespace fusesim {

namespace {

Script::Node joint_branch(const KeyId& a, const KeyId& b)
{
    using Node = Script::Node;
    return Node::all_of({Node::check_sig(a, 0), Node::check_sig(b, 1)});
}

} // namespace

DepositRefundSession::DepositRefundSession(ChainParams params, PartyContext* party_a,
                                           PartyContext* party_b,
                                           std::vector<std::uint8_t> secret_r,
                                           Outpoint deposit_funding, Outpoint cs_funding,
                                           Deviation a_dev, Deviation b_dev,
                                           std::optional<Script::Node> extra_branch)
    : m_params(params),
      m_a(party_a),
      m_b(party_b),
      m_a_dev(a_dev),
      m_b_dev(b_dev),
      m_h_r(hash(secret_r)),
      m_deposit_funding(deposit_funding),
      m_extra_branch(extra_branch ? std::move(*extra_branch)
                                  : joint_branch(party_a->keys.key_id, party_b->keys.key_id))
{
    // B commits r to A; if B never opens, A collects B's deposit instead of
    // the refund. A's own deviations do not touch the inner session.
    m_cs = std::make_unique<CsSession>("dr.cs", m_params, m_b, m_a, std::move(secret_r),
                                       cs_funding, CsSession::OpenPolicy::AtMargin,
                                       to_cs_point(b_dev), std::nullopt);
}

void DepositRefundSession::note(Ledger& ledger, std::string detail)
{
    ledger.trace().note(ledger.current_round(), "dr", std::move(detail));
}

void DepositRefundSession::on_round(Ledger& ledger)
{
    const std::uint32_t round = ledger.current_round();
    m_cs->run_step(ledger);

    // The deposit goes out only once A holds the refund signature of the
    // inner commitment; any earlier misbehavior aborts with nothing at risk.
    if (m_phase == Phase::CsCommit) {
        if (m_cs->phase() == CsSession::Phase::Aborted) {
            m_phase = Phase::Aborted;
            note(ledger, "phase=aborted reason=cs-" + m_cs->abort_reason());
        } else if (m_cs->phase() == CsSession::Phase::FuseSigned ||
                   m_cs->phase() == CsSession::Phase::Opened ||
                   m_cs->phase() == CsSession::Phase::Fused) {
            if (m_a_dev == DeviationPoint::DrSkipDeposit) {
                m_phase = Phase::Aborted;
                note(ledger, "phase=aborted reason=skip-deposit");
            } else {
                using Node = Script::Node;
                Transaction deposit;
                deposit.inputs.push_back(TxIn{m_deposit_funding, {}});
                // Slots: 0 A sig, 1 B sig, 2 secret.
                Script script(3, Node::any_of({Node::all_of({
                                                   Node::check_sig(m_a->keys.key_id, 0),
                                                   Node::check_hash(m_h_r, 2),
                                               }),
                                               m_extra_branch}));
                deposit.outputs.push_back(TxOut{m_params.d, std::move(script)});
                m_deposit_body = body_digest(deposit);
                deposit.inputs[0].witness = {
                    WitnessItem::from_sig(sign(m_a->keys, m_deposit_body))};
                m_deposit_entry = ledger.broadcast(std::move(deposit), "dr.deposit");
                m_phase = Phase::Deposited;
                note(ledger, "phase=deposited");
            }
        }
    }

    if (m_phase == Phase::Deposited) {
        if (auto conf = ledger.confirmed_by_body(m_deposit_body)) {
            m_deposit_confirmed = std::move(conf);
            // Refund body and signature exist from this point on; only the
            // secret is missing. No id was ever predicted.
            m_fuse_body = build_claim({m_deposit_confirmed->id, 0}, m_params.d,
                                      m_a->keys.key_id, 0, 3);
            m_phase = Phase::Armed;
            note(ledger, "phase=armed id=" + m_deposit_confirmed->id.hex());
        }
    }

    if (m_phase == Phase::Armed) {
        if (m_fuse_entry) {
            if (ledger.body_confirmed(body_digest(*m_fuse_body))) {
                m_phase = Phase::Refunded;
                note(ledger, "phase=refunded");
            }
        } else if (m_a->knows(m_h_r) && m_a_dev != DeviationPoint::DrSkipFuse) {
            Transaction fuse = *m_fuse_body;
            const Digest body = body_digest(fuse);
            fuse.inputs[0].witness[0] = WitnessItem::from_sig(sign(m_a->keys, body));
            fuse.inputs[0].witness[2] = WitnessItem::secret(m_a->known_secrets.at(m_h_r));
            m_fuse_entry = ledger.broadcast(std::move(fuse), "dr.fuse");
        } else if (m_cs->phase() == CsSession::Phase::Fused) {
            // B never opened; the inner refund compensated A.
            m_phase = Phase::Compensated;
            note(ledger, "phase=compensated");
        }
    }

    if (!m_swept && round == sweep_round(m_params)) {
        m_swept = true;
        if (m_a_dev) sweep(ledger, *m_a);
        if (m_b_dev) sweep(ledger, *m_b);
    }

    const bool resolved = !pending(ledger, m_deposit_entry) && !pending(ledger, m_fuse_entry);
    m_quiescent = round >= sweep_round(m_params) && resolved && m_cs->quiescent();
}

bool DepositRefundSession::quiescent() const
{
    return m_quiescent;
}

SessionReport DepositRefundSession::report() const
{
    SessionReport rep;
    switch (m_phase) {
    case Phase::CsCommit: rep.terminal_phase = "cs-commit"; break;
    case Phase::Deposited: rep.terminal_phase = "deposited"; break;
    case Phase::Armed: rep.terminal_phase = "armed"; break;
    case Phase::Refunded: rep.terminal_phase = "refunded"; break;
    case Phase::Compensated: rep.terminal_phase = "compensated"; break;
    case Phase::Aborted: rep.terminal_phase = "aborted"; break;
    }
    // Compensation from the inner commitment makes A whole; no fixed
    // penalty is owed on top, so nothing here can classify as stuck.
    return rep;
}

LegacyFuseOutcome legacy_fuse_flow(Ledger& ledger, PartyContext& party_a,
                                   PartyContext& party_b, Outpoint deposit_funding,
                                   std::optional<Script::Node> extra_branch,
                                   bool cooperate_after_failure)
{
    using Node = Script::Node;
    const ChainParams& params = ledger.params();
    LegacyFuseOutcome outcome;

    const UtxoEntry* funding = ledger.find_unspent(deposit_funding);
    if (funding == nullptr) {
        throw std::invalid_argument("deposit funding is not an unspent output");
    }
    const std::uint64_t value = funding->value;

    // Deposit claimable by both parties together (the refund path), plus an
    // optional contract branch. Slots: 0 A sig, 1 B sig, 2 free.
    Node refund_path =
        Node::all_of({Node::check_sig(party_a.keys.key_id, 0),
                      Node::check_sig(party_b.keys.key_id, 1)});
    Script script = extra_branch
                        ? Script(3, Node::any_of({std::move(refund_path), *extra_branch}))
                        : Script(3, std::move(refund_path));

    Transaction deposit;
    deposit.inputs.push_back(TxIn{deposit_funding, {}});
    deposit.outputs.push_back(TxOut{value, std::move(script)});
    const Digest deposit_body = body_digest(deposit);
    deposit.inputs[0].witness = {WitnessItem::from_sig(sign(party_a.keys, deposit_body))};

    // The defect, on purpose: the refund must be co-signed before the
    // deposit goes out, so it can only reference the predicted id.
    outcome.predicted_deposit_id = txid(deposit);
    Transaction fuse = build_claim({outcome.predicted_deposit_id, 0}, value,
                                   party_a.keys.key_id, params.t, 3);
    const Digest fuse_body = body_digest(fuse);
    fuse.inputs[0].witness[0] = WitnessItem::from_sig(sign(party_a.keys, fuse_body));
    fuse.inputs[0].witness[1] = WitnessItem::from_sig(sign(party_b.keys, fuse_body));

    ledger.broadcast(std::move(deposit), "legacy.deposit");

    const std::uint32_t limit = params.t + 3 * params.max_bb + 4;
    while (!ledger.body_confirmed(deposit_body) && ledger.current_round() < limit) {
        ledger.advance_round();
    }
    const auto confirmed = ledger.confirmed_by_body(deposit_body);
    if (!confirmed) {
        return outcome;  // deposit never made it; nothing at stake
    }
    outcome.confirmed_deposit_id = confirmed->id;

    while (ledger.current_round() < params.t) {
        ledger.advance_round();
    }

    const std::uint64_t fuse_entry = ledger.broadcast(std::move(fuse), "legacy.fuse");
    while (ledger.status(fuse_entry) == TxStatus::Pending && ledger.current_round() < limit) {
        ledger.advance_round();
    }
    if (ledger.status(fuse_entry) == TxStatus::Confirmed) {
        outcome.refund_confirmed = true;
        outcome.refund_round = ledger.current_round();
        return outcome;
    }
    outcome.fuse_error = ledger.rejection(fuse_entry);

    if (!cooperate_after_failure) {
        return outcome;
    }

    // Recovery needs B again: both re-sign a replacement over the id that
    // actually confirmed.
    Transaction retry = build_claim({confirmed->id, 0}, value, party_a.keys.key_id,
                                    params.t, 3);
    const Digest retry_body = body_digest(retry);
    retry.inputs[0].witness[0] = WitnessItem::from_sig(sign(party_a.keys, retry_body));
    retry.inputs[0].witness[1] = WitnessItem::from_sig(sign(party_b.keys, retry_body));
    const std::uint64_t retry_entry = ledger.broadcast(std::move(retry), "legacy.fuse2");
    while (ledger.status(retry_entry) == TxStatus::Pending &&
           ledger.current_round() < limit) {
        ledger.advance_round();
    }
    if (ledger.status(retry_entry) == TxStatus::Confirmed) {
        outcome.refund_confirmed = true;
        outcome.required_cooperation = true;
        outcome.refund_round = ledger.current_round();
    }
    return outcome;
}

} // namespace fusesim
