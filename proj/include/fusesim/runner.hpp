// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_RUNNER_HPP
#define FUSESIM_RUNNER_HPP

#include <fusesim/scenario.hpp>
#include <fusesim/strategy.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fusesim {

enum class FairnessClass { Nominal, PunishedDeviator, StuckFunds, Violation };

std::string to_string(FairnessClass cls);

struct PartyVerdict {
    std::string name;  // "a" / "b"
    bool honest = true;
    std::string deviation;  // point name, empty when honest
    std::int64_t initial = 0;
    std::int64_t final_balance = 0;

    std::int64_t delta() const { return final_balance - initial; }
};

struct Verdict {
    FairnessClass cls = FairnessClass::Nominal;
    std::array<PartyVerdict, 2> parties;
    std::string terminal_phase;
};

/** Classification is a pure function of what the trace records: deltas,
 *  deviations and the session's entitlement facts.
 *    violation: an honest party lost coins or a deviator gained some;
 *    stuck-funds: no violation, but a party owed the d-coin penalty did
 *                 not receive it (its recourse is stuck);
 *    punished-deviator: no violation, some deviator paid;
 *    nominal: everything else. */
FairnessClass classify(std::uint64_t d, const std::array<PartyVerdict, 2>& parties,
                       bool entitled_a, bool entitled_b);

struct RunResult {
    Verdict verdict;
    std::string trace_text;
    std::vector<ConfirmedTx> confirmed;
    std::uint64_t genesis_total = 0;
    std::uint64_t final_unspent = 0;
    std::uint32_t rounds_used = 0;
};

/** Runs one scenario to quiescence or max_rounds. Deterministic in the
 *  scenario (including its seed): equal scenarios give byte-identical
 *  traces. */
RunResult run_scenario(const Scenario& scenario);

/** Re-derives the verdict from an emitted trace; used to check that
 *  classification is a pure function of the trace. */
Verdict reclassify(std::string_view trace_text);

struct MatrixRow {
    std::string network;
    std::string party_a;
    std::string party_b;
    Verdict verdict;
};

struct MatrixReport {
    Protocol protocol = Protocol::Cs;
    std::uint32_t max_bb = 1;
    std::uint64_t d = 0;
    std::uint32_t t = 0;
    std::vector<MatrixRow> rows;
    std::size_t nominal = 0;
    std::size_t punished = 0;
    std::size_t stuck = 0;
    std::size_t violations = 0;

    /** Matrix-level pass criterion: the resistant protocols must show no
     *  violation and no stuck funds; the legacy protocol must exhibit at
     *  least one such outcome, or the attack search failed. */
    bool ok() const;

    std::string render_text() const;
    std::string render_records() const;
};

struct MatrixParams {
    std::uint32_t max_bb = 2;
    std::uint64_t d = 10;
    std::uint32_t t = 0;  // 0: derive as 8 * max_bb
    std::uint64_t seed = 1;
};

/** Runs every enumerated strategy triple for the protocol. Exhaustive,
 *  deterministic, bounded to max_bb <= 2. */
MatrixReport run_matrix(Protocol protocol, const MatrixParams& params = {});

} // namespace fusesim

#endif // FUSESIM_RUNNER_HPP
