// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FUSESIM_TRACE_HPP
#define FUSESIM_TRACE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fusesim {

/** One trace record: round, event, role, txid, body, detail, tab-separated.
 *  Chain events are broadcast/confirm/reject; the harness adds meta, note,
 *  balance and verdict records in the same six-field shape, with "-" for
 *  fields that do not apply. Traces with equal seeds are byte-identical. */
struct TraceRecord {
    std::uint32_t round = 0;
    std::string event;
    std::string role = "-";
    std::string txid = "-";
    std::string body = "-";
    std::string detail = "-";

    std::string line() const;
};

class TraceLog {
public:
    void add(TraceRecord record);
    void meta(std::string key, std::string detail);
    void note(std::uint32_t round, std::string role, std::string detail);

    const std::vector<TraceRecord>& records() const { return m_records; }
    std::string render() const;

private:
    std::vector<TraceRecord> m_records;
};

} // namespace fusesim

#endif // FUSESIM_TRACE_HPP
