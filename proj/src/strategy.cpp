// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/strategy.hpp>

#include <stdexcept>

namespace fusesim {

std::string to_string(Protocol protocol)
{
    switch (protocol) {
    case Protocol::Cs: return "cs";
    case Protocol::DepositRefund: return "deposit_refund";
    case Protocol::ScsLegacy: return "scs_legacy";
    case Protocol::NewScs: return "newscs";
    }
    return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name)
{
    if (name == "cs") return Protocol::Cs;
    if (name == "deposit_refund") return Protocol::DepositRefund;
    if (name == "scs_legacy") return Protocol::ScsLegacy;
    if (name == "newscs") return Protocol::NewScs;
    return std::nullopt;
}

std::string to_string(PartyRole role)
{
    return role == PartyRole::A ? "a" : "b";
}

NetworkStrategy::NetworkStrategy(std::uint32_t max_bb, Malleation malleation, DelayRule rule,
                                 std::uint32_t constant, std::vector<std::uint32_t> table)
    : m_max_bb(max_bb),
      m_malleation(malleation),
      m_delay_rule(rule),
      m_constant_delay(constant),
      m_delay_table(std::move(table))
{
    if (m_max_bb < 1) {
        throw std::invalid_argument("max_bb must be at least 1");
    }
    if (rule == DelayRule::Constant && (constant < 1 || constant > m_max_bb)) {
        throw std::invalid_argument("constant delay outside [1, max_bb]");
    }
    for (const auto d : m_delay_table) {
        if (d < 1 || d > m_max_bb) {
            throw std::invalid_argument("delay table entry outside [1, max_bb]");
        }
    }
}

NetworkStrategy NetworkStrategy::honest(std::uint32_t max_bb)
{
    return NetworkStrategy(max_bb, Malleation::None, DelayRule::Constant, 1, {});
}

NetworkStrategy NetworkStrategy::malleate_all(std::uint32_t max_bb)
{
    return NetworkStrategy(max_bb, Malleation::All, DelayRule::Constant, 1, {});
}

NetworkStrategy NetworkStrategy::constant_delay(std::uint32_t max_bb, std::uint32_t delay,
                                                bool malleate)
{
    return NetworkStrategy(max_bb, malleate ? Malleation::All : Malleation::None,
                           DelayRule::Constant, delay, {});
}

NetworkStrategy NetworkStrategy::max_delay(std::uint32_t max_bb, bool malleate)
{
    return NetworkStrategy(max_bb, malleate ? Malleation::All : Malleation::None,
                           DelayRule::Maximal, 0, {});
}

NetworkStrategy NetworkStrategy::delay_table(std::uint32_t max_bb,
                                             std::vector<std::uint32_t> delays, bool malleate)
{
    return NetworkStrategy(max_bb, malleate ? Malleation::All : Malleation::None,
                           DelayRule::Table, 0, std::move(delays));
}

NetworkStrategy& NetworkStrategy::with_order(ConflictOrder order)
{
    m_order = order;
    return *this;
}

NetworkStrategy& NetworkStrategy::with_malleated_bodies(std::set<Digest> bodies)
{
    m_malleation = Malleation::Bodies;
    m_bodies = std::move(bodies);
    return *this;
}

std::uint32_t NetworkStrategy::delay_for(std::uint64_t entry_seq) const
{
    switch (m_delay_rule) {
    case DelayRule::Constant: return m_constant_delay;
    case DelayRule::Maximal: return m_max_bb;
    case DelayRule::Table:
        if (entry_seq < m_delay_table.size()) return m_delay_table[entry_seq];
        return 1;
    }
    return 1;
}

bool NetworkStrategy::should_malleate(const Transaction& tx) const
{
    switch (m_malleation) {
    case Malleation::None: return false;
    case Malleation::All: return true;
    case Malleation::Bodies: return m_bodies.count(body_digest(tx)) != 0;
    }
    return false;
}

std::string NetworkStrategy::name() const
{
    std::string out = "malleate=";
    switch (m_malleation) {
    case Malleation::None: out += "none"; break;
    case Malleation::All: out += "all"; break;
    case Malleation::Bodies: out += "bodies"; break;
    }
    out += " delay=";
    switch (m_delay_rule) {
    case DelayRule::Constant:
        out += m_constant_delay == 1 ? "min" : std::to_string(m_constant_delay);
        break;
    case DelayRule::Maximal: out += "max"; break;
    case DelayRule::Table: out += "table"; break;
    }
    out += " order=";
    out += m_order == ConflictOrder::Fifo ? "fifo" : "lifo";
    return out;
}

std::pair<Transaction, std::uint32_t> on_broadcast(const NetworkStrategy& strategy,
                                                   const Transaction& tx, std::uint64_t seed,
                                                   std::uint64_t entry_seq)
{
    const std::uint32_t delay = strategy.delay_for(entry_seq);
    if (!strategy.should_malleate(tx)) {
        return {tx, delay};
    }

    // Deterministic padding: derived from the seed and the full transaction
    // id, so distinct transactions receive distinct paddings.
    txid_audit::Sanction sanction;
    std::vector<std::uint8_t> material;
    material.reserve(40);
    for (int i = 0; i < 8; ++i) material.push_back(std::uint8_t(seed >> (8 * i)));
    const Digest id = txid(tx);
    material.insert(material.end(), id.bytes.begin(), id.bytes.end());
    const Digest pad_source = hash(material);
    const std::vector<std::uint8_t> padding(pad_source.bytes.begin(),
                                            pad_source.bytes.begin() + 8);
    return {malleate(tx, padding), delay};
}

std::string to_string(DeviationPoint point)
{
    switch (point) {
    case DeviationPoint::CsSkipCommit: return "skip-commit";
    case DeviationPoint::CsSkipFuseSig: return "skip-fuse-sig";
    case DeviationPoint::CsBadFuseSig: return "bad-fuse-sig";
    case DeviationPoint::CsSkipOpen: return "skip-open";
    case DeviationPoint::CsSkipFuse: return "skip-fuse";
    case DeviationPoint::DrSkipDeposit: return "skip-deposit";
    case DeviationPoint::DrSkipFuse: return "skip-fuse";
    case DeviationPoint::DrSkipCsCommit: return "skip-cs-commit";
    case DeviationPoint::DrSkipCsFuseSig: return "skip-cs-fuse-sig";
    case DeviationPoint::DrBadCsFuseSig: return "bad-cs-fuse-sig";
    case DeviationPoint::DrSkipCsOpen: return "skip-cs-open";
    case DeviationPoint::LegacySkipCommitSig: return "skip-commit-sig";
    case DeviationPoint::LegacySkipFuseSig: return "skip-fuse-sig";
    case DeviationPoint::LegacySkipOpen: return "skip-open";
    case DeviationPoint::NewScsSkipCsCommit: return "skip-cs-commit";
    case DeviationPoint::NewScsSkipCsFuseSig: return "skip-cs-fuse-sig";
    case DeviationPoint::NewScsBadCsFuseSig: return "bad-cs-fuse-sig";
    case DeviationPoint::NewScsSkipCommitSig: return "skip-commit-sig";
    case DeviationPoint::NewScsSkipOpen: return "skip-open";
    case DeviationPoint::NewScsSkipCsOpen: return "skip-cs-open";
    }
    return "?";
}

std::vector<DeviationPoint> deviation_points(Protocol protocol, PartyRole role)
{
    switch (protocol) {
    case Protocol::Cs:
        if (role == PartyRole::A) {
            // committer
            return {DeviationPoint::CsSkipCommit, DeviationPoint::CsSkipFuseSig,
                    DeviationPoint::CsBadFuseSig, DeviationPoint::CsSkipOpen};
        }
        return {DeviationPoint::CsSkipFuse};
    case Protocol::DepositRefund:
        if (role == PartyRole::A) {
            // depositor
            return {DeviationPoint::DrSkipDeposit, DeviationPoint::DrSkipFuse};
        }
        return {DeviationPoint::DrSkipCsCommit, DeviationPoint::DrSkipCsFuseSig,
                DeviationPoint::DrBadCsFuseSig, DeviationPoint::DrSkipCsOpen};
    case Protocol::ScsLegacy:
        return {DeviationPoint::LegacySkipCommitSig, DeviationPoint::LegacySkipFuseSig,
                DeviationPoint::LegacySkipOpen};
    case Protocol::NewScs:
        return {DeviationPoint::NewScsSkipCsCommit, DeviationPoint::NewScsSkipCsFuseSig,
                DeviationPoint::NewScsBadCsFuseSig, DeviationPoint::NewScsSkipCommitSig,
                DeviationPoint::NewScsSkipOpen, DeviationPoint::NewScsSkipCsOpen};
    }
    return {};
}

bool is_bad_signature_point(DeviationPoint point)
{
    return point == DeviationPoint::CsBadFuseSig || point == DeviationPoint::DrBadCsFuseSig ||
           point == DeviationPoint::NewScsBadCsFuseSig;
}

bool is_withhold_secret_point(DeviationPoint point)
{
    return point == DeviationPoint::CsSkipOpen || point == DeviationPoint::DrSkipCsOpen ||
           point == DeviationPoint::LegacySkipOpen || point == DeviationPoint::NewScsSkipOpen;
}

PartyStrategy::PartyStrategy(PartyRole role, std::optional<DeviationPoint> point)
    : m_role(role), m_point(point)
{
}

PartyStrategy PartyStrategy::honest(PartyRole role)
{
    return PartyStrategy(role, std::nullopt);
}

PartyStrategy PartyStrategy::abort_at(PartyRole role, DeviationPoint point)
{
    return PartyStrategy(role, point);
}

bool PartyStrategy::withhold_secret() const
{
    return m_point && is_withhold_secret_point(*m_point);
}

bool PartyStrategy::send_bad_signature() const
{
    return m_point && is_bad_signature_point(*m_point);
}

std::string PartyStrategy::name() const
{
    if (!m_point) return "honest";
    return "deviation=" + to_string(*m_point);
}

std::vector<StrategyTriple> enumerate_strategies(std::uint32_t max_bb, Protocol protocol)
{
    if (max_bb > 2) {
        throw ExhaustiveBoundExceeded("exhaustive enumeration is bounded to max_bb <= 2");
    }

    std::vector<PartyStrategy> a_options{PartyStrategy::honest(PartyRole::A)};
    for (const auto point : deviation_points(protocol, PartyRole::A)) {
        a_options.push_back(PartyStrategy::abort_at(PartyRole::A, point));
    }
    std::vector<PartyStrategy> b_options{PartyStrategy::honest(PartyRole::B)};
    for (const auto point : deviation_points(protocol, PartyRole::B)) {
        b_options.push_back(PartyStrategy::abort_at(PartyRole::B, point));
    }

    std::vector<StrategyTriple> out;
    out.reserve(4 * a_options.size() * b_options.size());
    for (const bool malleate : {false, true}) {
        for (const bool maximal : {false, true}) {
            const NetworkStrategy net = maximal ? NetworkStrategy::max_delay(max_bb, malleate)
                                                : NetworkStrategy::constant_delay(max_bb, 1, malleate);
            for (const auto& a : a_options) {
                for (const auto& b : b_options) {
                    out.push_back(StrategyTriple{net, a, b});
                }
            }
        }
    }
    return out;
}

} // namespace fusesim
