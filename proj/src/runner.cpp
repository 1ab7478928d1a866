// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/runner.hpp>

#include <fusesim/protocol/cs.hpp>
#include <fusesim/protocol/deposit_refund.hpp>
#include <fusesim/protocol/newscs.hpp>
#include <fusesim/protocol/scs_legacy.hpp>

#include <charconv>
#include <memory>
#include <random>
#include <sstream>

namespace fusesim {

std::string to_string(FairnessClass cls)
{
    switch (cls) {
    case FairnessClass::Nominal: return "nominal";
    case FairnessClass::PunishedDeviator: return "punished-deviator";
    case FairnessClass::StuckFunds: return "stuck-funds";
    case FairnessClass::Violation: return "violation";
    }
    return "?";
}

FairnessClass classify(std::uint64_t d, const std::array<PartyVerdict, 2>& parties,
                       bool entitled_a, bool entitled_b)
{
    for (const auto& p : parties) {
        if (p.honest && p.delta() < 0) return FairnessClass::Violation;
        if (!p.honest && p.delta() > 0) return FairnessClass::Violation;
    }
    const std::array<bool, 2> entitled{entitled_a, entitled_b};
    for (std::size_t i = 0; i < 2; ++i) {
        if (parties[i].honest && entitled[i] && parties[i].delta() < std::int64_t(d)) {
            return FairnessClass::StuckFunds;
        }
    }
    for (const auto& p : parties) {
        if (!p.honest && p.delta() < 0) return FairnessClass::PunishedDeviator;
    }
    return FairnessClass::Nominal;
}

namespace {

std::vector<std::uint8_t> draw_secret(std::mt19937_64& rng)
{
    std::vector<std::uint8_t> out(32);
    for (std::size_t i = 0; i < 4; ++i) {
        const std::uint64_t word = rng();
        for (int j = 0; j < 8; ++j) {
            out[8 * i + j] = std::uint8_t(word >> (8 * j));
        }
    }
    return out;
}

} // namespace

RunResult run_scenario(const Scenario& scenario)
{
    scenario.check();

    Ledger ledger(scenario.params, scenario.network, scenario.seed);
    TraceLog& trace = ledger.trace();
    trace.meta("protocol", to_string(scenario.protocol));
    trace.meta("seed", std::to_string(scenario.seed));
    {
        std::string params = "d=" + std::to_string(scenario.params.d) +
                             " t=" + std::to_string(scenario.params.t) +
                             " max_bb=" + std::to_string(scenario.params.max_bb) +
                             " max_rounds=" + std::to_string(scenario.max_rounds);
        trace.meta("params", std::move(params));
    }
    trace.meta("network", scenario.network.name());
    trace.meta("party.a", scenario.party_a.name());
    trace.meta("party.b", scenario.party_b.name());

    PartyContext a("a", keygen(scenario.seed, "A"));
    PartyContext b("b", keygen(scenario.seed, "B"));

    std::mt19937_64 rng(scenario.seed);
    const std::uint64_t d = scenario.params.d;
    std::unique_ptr<ProtocolSession> session;

    switch (scenario.protocol) {
    case Protocol::Cs: {
        auto secret = draw_secret(rng);
        const auto outs = ledger.genesis({{a.keys.key_id, d, "funding.a"}});
        session = std::make_unique<CsSession>(
            "cs", scenario.params, &a, &b, std::move(secret), outs[0],
            CsSession::OpenPolicy::AtMargin, scenario.party_a.abort_point(),
            scenario.party_b.abort_point());
        break;
    }
    case Protocol::DepositRefund: {
        auto secret_r = draw_secret(rng);
        const auto outs = ledger.genesis(
            {{a.keys.key_id, d, "funding.a"}, {b.keys.key_id, d, "funding.b"}});
        session = std::make_unique<DepositRefundSession>(
            scenario.params, &a, &b, std::move(secret_r), outs[0], outs[1],
            scenario.party_a.abort_point(), scenario.party_b.abort_point());
        break;
    }
    case Protocol::ScsLegacy: {
        auto s_a = draw_secret(rng);
        auto s_b = draw_secret(rng);
        const auto outs = ledger.genesis(
            {{a.keys.key_id, d, "funding.a"}, {b.keys.key_id, d, "funding.b"}});
        session = std::make_unique<ScsLegacySession>(
            scenario.params, &a, &b, std::move(s_a), std::move(s_b), outs[0], outs[1],
            scenario.party_a.abort_point(), scenario.party_b.abort_point());
        break;
    }
    case Protocol::NewScs: {
        NewScsSession::Secrets secrets;
        secrets.s_a = draw_secret(rng);
        secrets.s_b = draw_secret(rng);
        secrets.r_a = draw_secret(rng);
        secrets.r_b = draw_secret(rng);
        const auto outs = ledger.genesis({{a.keys.key_id, d, "funding.a1"},
                                          {a.keys.key_id, d, "funding.a2"},
                                          {b.keys.key_id, d, "funding.b1"},
                                          {b.keys.key_id, d, "funding.b2"}});
        session = std::make_unique<NewScsSession>(
            scenario.params, &a, &b, std::move(secrets),
            NewScsSession::Fundings{outs[0], outs[1], outs[2], outs[3]},
            scenario.party_a.abort_point(), scenario.party_b.abort_point());
        break;
    }
    }

    const std::int64_t initial_a = ledger.balance(a.keys.key_id);
    const std::int64_t initial_b = ledger.balance(b.keys.key_id);

    for (std::uint32_t round = 1; round <= scenario.max_rounds; ++round) {
        ledger.advance_round();
        session->on_round(ledger);
        if (session->quiescent() && ledger.mempool_empty()) break;
    }

    const SessionReport rep = session->report();
    const std::uint32_t end_round = ledger.current_round();
    trace.note(end_round, "session",
               std::string("entitled.a=") + (rep.entitled_a ? "1" : "0") +
                   " entitled.b=" + (rep.entitled_b ? "1" : "0"));

    Verdict verdict;
    verdict.terminal_phase = rep.terminal_phase;
    verdict.parties[0] = PartyVerdict{
        "a", !scenario.party_a.deviates(),
        scenario.party_a.abort_point() ? to_string(*scenario.party_a.abort_point()) : "",
        initial_a, ledger.balance(a.keys.key_id)};
    verdict.parties[1] = PartyVerdict{
        "b", !scenario.party_b.deviates(),
        scenario.party_b.abort_point() ? to_string(*scenario.party_b.abort_point()) : "",
        initial_b, ledger.balance(b.keys.key_id)};
    verdict.cls =
        classify(scenario.params.d, verdict.parties, rep.entitled_a, rep.entitled_b);

    for (const auto& p : verdict.parties) {
        trace.add(TraceRecord{end_round, "balance", p.name, "-", "-",
                              "initial=" + std::to_string(p.initial) +
                                  " final=" + std::to_string(p.final_balance)});
    }
    trace.add(TraceRecord{end_round, "verdict", "-", "-", "-",
                          "class=" + to_string(verdict.cls) + " phase=" + rep.terminal_phase});

    RunResult result;
    result.verdict = verdict;
    result.trace_text = trace.render();
    result.confirmed = ledger.confirmed();
    result.genesis_total = ledger.genesis_total();
    result.final_unspent = ledger.total_unspent();
    result.rounds_used = end_round;
    return result;
}

namespace {

std::vector<std::string> split_fields(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            out.emplace_back(line.substr(pos));
            break;
        }
        out.emplace_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return out;
}

std::optional<std::string> detail_value(std::string_view detail, std::string_view key)
{
    std::size_t pos = 0;
    while (pos < detail.size()) {
        std::size_t end = detail.find(' ', pos);
        if (end == std::string_view::npos) end = detail.size();
        const std::string_view token = detail.substr(pos, end - pos);
        const std::size_t eq = token.find('=');
        if (eq != std::string_view::npos && token.substr(0, eq) == key) {
            return std::string(token.substr(eq + 1));
        }
        pos = end + 1;
    }
    return std::nullopt;
}

std::int64_t parse_int64(const std::string& text)
{
    std::int64_t out = 0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

} // namespace

Verdict reclassify(std::string_view trace_text)
{
    std::uint64_t d = 0;
    bool entitled_a = false;
    bool entitled_b = false;
    std::array<PartyVerdict, 2> parties;
    parties[0].name = "a";
    parties[1].name = "b";
    std::string phase;

    std::size_t pos = 0;
    while (pos < trace_text.size()) {
        std::size_t eol = trace_text.find('\n', pos);
        if (eol == std::string_view::npos) eol = trace_text.size();
        const std::string_view line = trace_text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        if (fields.size() != 6) continue;
        const std::string& event = fields[1];
        const std::string& role = fields[2];
        const std::string& detail = fields[5];

        if (event == "meta" && role == "params") {
            if (const auto v = detail_value(detail, "d")) d = std::uint64_t(parse_int64(*v));
        } else if (event == "meta" && (role == "party.a" || role == "party.b")) {
            PartyVerdict& p = parties[role == "party.a" ? 0 : 1];
            if (const auto v = detail_value(detail, "deviation")) {
                p.honest = false;
                p.deviation = *v;
            } else {
                p.honest = true;
            }
        } else if (event == "note" && role == "session") {
            if (const auto v = detail_value(detail, "entitled.a")) entitled_a = *v == "1";
            if (const auto v = detail_value(detail, "entitled.b")) entitled_b = *v == "1";
        } else if (event == "balance") {
            PartyVerdict& p = parties[role == "a" ? 0 : 1];
            if (const auto v = detail_value(detail, "initial")) p.initial = parse_int64(*v);
            if (const auto v = detail_value(detail, "final")) p.final_balance = parse_int64(*v);
        } else if (event == "verdict") {
            if (const auto v = detail_value(detail, "phase")) phase = *v;
        }
    }

    Verdict verdict;
    verdict.parties = parties;
    verdict.terminal_phase = phase;
    verdict.cls = classify(d, parties, entitled_a, entitled_b);
    return verdict;
}

bool MatrixReport::ok() const
{
    if (protocol == Protocol::ScsLegacy) {
        // The attack search must find the malleability failure.
        return stuck + violations > 0;
    }
    return stuck == 0 && violations == 0;
}

std::string MatrixReport::render_text() const
{
    std::ostringstream out;
    out << "protocol=" << to_string(protocol) << " max_bb=" << max_bb << " d=" << d
        << " t=" << t << " scenarios=" << rows.size() << '\n';
    for (const auto& row : rows) {
        out << "  [" << row.network << "] a=" << row.party_a << " b=" << row.party_b
            << " -> " << to_string(row.verdict.cls)
            << " delta_a=" << row.verdict.parties[0].delta()
            << " delta_b=" << row.verdict.parties[1].delta()
            << " phase=" << row.verdict.terminal_phase << '\n';
    }
    out << "summary nominal=" << nominal << " punished=" << punished << " stuck=" << stuck
        << " violations=" << violations << " ok=" << (ok() ? "yes" : "no") << '\n';
    return out.str();
}

std::string MatrixReport::render_records() const
{
    std::ostringstream out;
    for (const auto& row : rows) {
        out << to_string(protocol) << '\t' << max_bb << '\t' << row.network << '\t'
            << row.party_a << '\t' << row.party_b << '\t' << to_string(row.verdict.cls)
            << '\t' << row.verdict.parties[0].delta() << '\t'
            << row.verdict.parties[1].delta() << '\t' << row.verdict.terminal_phase << '\n';
    }
    return out.str();
}

MatrixReport run_matrix(Protocol protocol, const MatrixParams& params)
{
    MatrixReport report;
    report.protocol = protocol;
    report.max_bb = params.max_bb;
    report.d = params.d;
    report.t = params.t == 0 ? 8 * params.max_bb : params.t;

    for (const auto& triple : enumerate_strategies(params.max_bb, protocol)) {
        Scenario sc = Scenario::defaults(protocol, params.max_bb);
        sc.seed = params.seed;
        sc.params.d = params.d;
        sc.params.t = report.t;
        sc.max_rounds = sc.params.t + 3 * params.max_bb + 4;
        sc.network = triple.network;
        sc.party_a = triple.party_a;
        sc.party_b = triple.party_b;

        const RunResult result = run_scenario(sc);
        MatrixRow row{triple.network.name(), triple.party_a.name(), triple.party_b.name(),
                      result.verdict};
        switch (result.verdict.cls) {
        case FairnessClass::Nominal: ++report.nominal; break;
        case FairnessClass::PunishedDeviator: ++report.punished; break;
        case FairnessClass::StuckFunds: ++report.stuck; break;
        case FairnessClass::Violation: ++report.violations; break;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace fusesim
