// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/runner.hpp>
#include <fusesim/scenario.hpp>

#include "testutil.hpp"

#include <doctest.h>

using namespace fusesim;

namespace {

const char* FULL_CONFIG = R"(# a full scenario file
protocol = newscs
seed = 7
params.d = 10
params.t = 16
params.max_bb = 2
params.max_rounds = 26
network.malleate = all
network.delay = max
network.order = fifo
party.a.abort_at = skip-open
)";

} // namespace

TEST_CASE("scenario files parse with defaults and comments")
{
    const Scenario sc = parse_scenario(FULL_CONFIG);
    CHECK(sc.protocol == Protocol::NewScs);
    CHECK(sc.seed == 7);
    CHECK(sc.params.d == 10);
    CHECK(sc.params.t == 16);
    CHECK(sc.params.max_bb == 2);
    CHECK(sc.max_rounds == 26);
    CHECK(sc.network.malleation() == NetworkStrategy::Malleation::All);
    CHECK(sc.party_a.deviates_at(DeviationPoint::NewScsSkipOpen));
    CHECK_FALSE(sc.party_b.deviates());

    const Scenario minimal = parse_scenario("protocol = cs\n");
    CHECK(minimal.protocol == Protocol::Cs);
    CHECK(minimal.params.max_bb == 2);
    CHECK(minimal.params.t == 16);
    CHECK(minimal.max_rounds == 26);
}

TEST_CASE("config errors carry the offending field")
{
    const auto field_of = [](const char* text) {
        try {
            parse_scenario(text);
        } catch (const ConfigError& e) {
            return e.field;
        }
        return std::string("no error");
    };

    CHECK(field_of("") == "protocol");
    CHECK(field_of("protocol = lightning\n") == "protocol");
    CHECK(field_of("protocol = cs\nparams.t = 5\n") == "params");  // t <= 3*max_bb
    CHECK(field_of("protocol = cs\nparams.d = x\n") == "params.d");
    CHECK(field_of("protocol = cs\nnetwork.delay = 9\n") == "network.delay");
    CHECK(field_of("protocol = cs\nnetwork.malleate = maybe\n") == "network.malleate");
    CHECK(field_of("protocol = cs\nparty.a.abort_at = skip-everything\n") ==
          "party.a.abort_at");
    CHECK(field_of("protocol = cs\nparty.b.withhold_secret = true\n") ==
          "party.b.withhold_secret");  // the recipient holds no secret
    CHECK(field_of("protocol = cs\nparty.a.abort_at = skip-open\nparty.a.send_bad_signature "
                   "= true\n") == "party.a");
    CHECK(field_of("protocol = cs\nunknown.key = 1\n") == "unknown.key");
    CHECK(field_of("protocol = cs\nprotocol = cs\n") == "protocol");
    CHECK(field_of("protocol = cs\nparams.max_rounds = 5\n") == "params.max_rounds");
}

TEST_CASE("withhold and bad-signature flags resolve to the protocol's named steps")
{
    const Scenario withhold =
        parse_scenario("protocol = cs\nparty.a.withhold_secret = true\n");
    CHECK(withhold.party_a.deviates_at(DeviationPoint::CsSkipOpen));
    CHECK(withhold.party_a.withhold_secret());

    const Scenario bad_sig =
        parse_scenario("protocol = newscs\nparty.b.send_bad_signature = true\n");
    CHECK(bad_sig.party_b.deviates_at(DeviationPoint::NewScsBadCsFuseSig));
}

TEST_CASE("identical scenarios give byte-identical traces")
{
    const Scenario sc = parse_scenario(FULL_CONFIG);
    const RunResult one = run_scenario(sc);
    const RunResult two = run_scenario(sc);
    CHECK(one.trace_text == two.trace_text);
    CHECK(one.trace_text.size() > 100);

    Scenario reseeded = sc;
    reseeded.seed = 8;
    const RunResult three = run_scenario(reseeded);
    CHECK(one.trace_text != three.trace_text);
}

TEST_CASE("the verdict re-derives from the emitted trace alone")
{
    const std::vector<Scenario> scenarios = {
        parse_scenario("protocol = cs\n"),
        parse_scenario("protocol = cs\nparty.a.abort_at = skip-open\n"),
        parse_scenario("protocol = scs_legacy\nnetwork.malleate = all\n"
                       "party.a.abort_at = skip-open\n"),
        parse_scenario("protocol = newscs\nnetwork.malleate = all\n"
                       "party.b.abort_at = skip-cs-open\n"),
        parse_scenario("protocol = deposit_refund\nparty.b.abort_at = skip-cs-open\n"),
    };
    for (const auto& sc : scenarios) {
        const RunResult result = run_scenario(sc);
        const Verdict again = reclassify(result.trace_text);
        CHECK(again.cls == result.verdict.cls);
        for (int i = 0; i < 2; ++i) {
            CHECK(again.parties[i].delta() == result.verdict.parties[i].delta());
            CHECK(again.parties[i].honest == result.verdict.parties[i].honest);
        }
        CHECK(again.terminal_phase == result.verdict.terminal_phase);
    }
}

TEST_CASE("classification invariant: violation iff an honest loss or a deviator gain")
{
    for (const auto protocol : {Protocol::Cs, Protocol::ScsLegacy, Protocol::NewScs}) {
        const MatrixReport report = run_matrix(protocol, MatrixParams{1, 10, 0, 1});
        for (const auto& row : report.rows) {
            bool honest_loss = false;
            bool deviator_gain = false;
            for (const auto& p : row.verdict.parties) {
                if (p.honest && p.delta() < 0) honest_loss = true;
                if (!p.honest && p.delta() > 0) deviator_gain = true;
            }
            CHECK((row.verdict.cls == FairnessClass::Violation) ==
                  (honest_loss || deviator_gain));
        }
    }
}

TEST_CASE("matrix reports are deterministic and carry the verdict counts")
{
    const MatrixReport one = run_matrix(Protocol::Cs, MatrixParams{1, 10, 0, 1});
    const MatrixReport two = run_matrix(Protocol::Cs, MatrixParams{1, 10, 0, 1});
    CHECK(one.render_text() == two.render_text());
    CHECK(one.render_records() == two.render_records());
    CHECK(one.rows.size() == enumerate_strategies(1, Protocol::Cs).size());
    CHECK(one.nominal + one.punished + one.stuck + one.violations == one.rows.size());
    CHECK(one.ok());
}

TEST_CASE("matrix exit semantics: resistant protocols clean, legacy must fail")
{
    const MatrixReport cs = run_matrix(Protocol::Cs, MatrixParams{1, 10, 0, 1});
    CHECK(cs.violations == 0);
    CHECK(cs.stuck == 0);
    CHECK(cs.ok());

    const MatrixReport legacy = run_matrix(Protocol::ScsLegacy, MatrixParams{1, 10, 0, 1});
    CHECK(legacy.stuck > 0);
    CHECK(legacy.ok());

    MatrixReport empty = legacy;
    empty.stuck = 0;
    empty.violations = 0;
    CHECK_FALSE(empty.ok());  // a legacy matrix without the attack means the search failed
}

TEST_CASE("conservation holds at the end of every matrix row")
{
    for (const auto& triple : enumerate_strategies(1, Protocol::NewScs)) {
        Scenario sc = Scenario::defaults(Protocol::NewScs, 1);
        sc.network = triple.network;
        sc.party_a = triple.party_a;
        sc.party_b = triple.party_b;
        const RunResult result = run_scenario(sc);
        CHECK(result.final_unspent == result.genesis_total);
    }
}
