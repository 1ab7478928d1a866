// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/trace.hpp>

#include <utility>

namespace fusesim {

std::string TraceRecord::line() const
{
    std::string out = std::to_string(round);
    out += '\t';
    out += event;
    out += '\t';
    out += role;
    out += '\t';
    out += txid;
    out += '\t';
    out += body;
    out += '\t';
    out += detail;
    return out;
}

void TraceLog::add(TraceRecord record)
{
    m_records.push_back(std::move(record));
}

void TraceLog::meta(std::string key, std::string detail)
{
    add(TraceRecord{0, "meta", std::move(key), "-", "-", std::move(detail)});
}

void TraceLog::note(std::uint32_t round, std::string role, std::string detail)
{
    add(TraceRecord{round, "note", std::move(role), "-", "-", std::move(detail)});
}

std::string TraceLog::render() const
{
    std::string out;
    for (const auto& record : m_records) {
        out += record.line();
        out += '\n';
    }
    return out;
}

} // namespace fusesim
