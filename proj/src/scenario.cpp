// Copyright (c) 2026 The fusesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fusesim/scenario.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <vector>

namespace fusesim {

Scenario Scenario::defaults(Protocol protocol, std::uint32_t max_bb)
{
    Scenario sc;
    sc.protocol = protocol;
    sc.seed = 1;
    sc.params = ChainParams{max_bb, 10, 8 * max_bb};
    sc.max_rounds = sc.params.t + 3 * max_bb + 4;
    sc.network = NetworkStrategy::honest(max_bb);
    sc.party_a = PartyStrategy::honest(PartyRole::A);
    sc.party_b = PartyStrategy::honest(PartyRole::B);
    return sc;
}

void Scenario::check() const
{
    try {
        params.check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("params", e.what());
    }
    if (max_rounds <= params.t + 2 * params.max_bb) {
        throw ConfigError("params.max_rounds", "must exceed t + 2*max_bb");
    }
    if (network.max_bb() != params.max_bb) {
        throw ConfigError("network", "delay bound differs from params.max_bb");
    }
    if (party_a.role() != PartyRole::A || party_b.role() != PartyRole::B) {
        throw ConfigError("party", "strategy carries the wrong role");
    }
    for (const auto* ps : {&party_a, &party_b}) {
        if (!ps->abort_point()) continue;
        const auto points = deviation_points(protocol, ps->role());
        if (std::find(points.begin(), points.end(), *ps->abort_point()) == points.end()) {
            throw ConfigError("party." + to_string(ps->role()) + ".abort_at",
                              "'" + to_string(*ps->abort_point()) + "' is not a step of " +
                                  to_string(protocol) + " for this party");
        }
    }
}

PartyStrategy resolve_party(Protocol protocol, PartyRole role,
                            const std::optional<std::string>& abort_at, bool withhold_secret,
                            bool send_bad_signature)
{
    const std::string field = "party." + to_string(role);
    const int active = int(abort_at.has_value()) + int(withhold_secret) + int(send_bad_signature);
    if (active > 1) {
        throw ConfigError(field, "at most one deviation may be active per party");
    }
    const auto points = deviation_points(protocol, role);

    if (abort_at) {
        for (const auto point : points) {
            if (to_string(point) == *abort_at) {
                return PartyStrategy::abort_at(role, point);
            }
        }
        std::string valid;
        for (const auto point : points) {
            if (!valid.empty()) valid += ", ";
            valid += to_string(point);
        }
        throw ConfigError(field + ".abort_at",
                          "unknown step '" + *abort_at + "' (valid: " + valid + ")");
    }
    if (withhold_secret) {
        for (const auto point : points) {
            if (is_withhold_secret_point(point)) {
                return PartyStrategy::abort_at(role, point);
            }
        }
        throw ConfigError(field + ".withhold_secret",
                          "this party holds no secret to withhold in " + to_string(protocol));
    }
    if (send_bad_signature) {
        for (const auto point : points) {
            if (is_bad_signature_point(point)) {
                return PartyStrategy::abort_at(role, point);
            }
        }
        throw ConfigError(field + ".send_bad_signature",
                          "this party sends no checked signature in " + to_string(protocol));
    }
    return PartyStrategy::honest(role);
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::uint64_t parse_uint(const std::string& field, std::string_view value)
{
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError(field, "expected a non-negative integer, got '" + std::string(value) +
                                     "'");
    }
    return out;
}

bool parse_bool(const std::string& field, std::string_view value)
{
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(field, "expected true or false, got '" + std::string(value) + "'");
}

} // namespace

Scenario parse_scenario(std::string_view text)
{
    std::map<std::string, std::string> kv;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), "expected 'key = value'");
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty()) {
            throw ConfigError(std::string(line), "empty key");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError(key, "duplicate key");
        }
    }

    static const std::vector<std::string> known = {
        "protocol",          "seed",
        "params.d",          "params.t",
        "params.max_bb",     "params.max_rounds",
        "network.malleate",  "network.delay",
        "network.order",     "party.a.abort_at",
        "party.a.withhold_secret", "party.a.send_bad_signature",
        "party.b.abort_at",  "party.b.withhold_secret",
        "party.b.send_bad_signature",
    };
    for (const auto& [key, value] : kv) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(key, "unknown key");
        }
    }

    const auto get = [&](const char* key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    const auto proto_text = get("protocol");
    if (!proto_text) {
        throw ConfigError("protocol", "required (cs | deposit_refund | scs_legacy | newscs)");
    }
    const auto protocol = parse_protocol(*proto_text);
    if (!protocol) {
        throw ConfigError("protocol", "unknown protocol '" + *proto_text + "'");
    }

    std::uint32_t max_bb = 2;
    if (const auto v = get("params.max_bb")) {
        max_bb = std::uint32_t(parse_uint("params.max_bb", *v));
    }

    Scenario sc = Scenario::defaults(*protocol, std::max<std::uint32_t>(max_bb, 1));
    sc.params.max_bb = max_bb;  // let check() report a zero bound

    if (const auto v = get("seed")) sc.seed = parse_uint("seed", *v);
    if (const auto v = get("params.d")) sc.params.d = parse_uint("params.d", *v);
    if (const auto v = get("params.t")) {
        sc.params.t = std::uint32_t(parse_uint("params.t", *v));
        sc.max_rounds = sc.params.t + 3 * max_bb + 4;
    }
    if (const auto v = get("params.max_rounds")) {
        sc.max_rounds = std::uint32_t(parse_uint("params.max_rounds", *v));
    }

    bool malleate = false;
    if (const auto v = get("network.malleate")) {
        if (*v == "all") {
            malleate = true;
        } else if (*v != "none") {
            throw ConfigError("network.malleate", "expected none or all, got '" + *v + "'");
        }
    }
    try {
        if (const auto v = get("network.delay"); !v || *v == "min") {
            sc.network = NetworkStrategy::constant_delay(max_bb, 1, malleate);
        } else if (*v == "max") {
            sc.network = NetworkStrategy::max_delay(max_bb, malleate);
        } else {
            const auto delay = std::uint32_t(parse_uint("network.delay", *v));
            sc.network = NetworkStrategy::constant_delay(max_bb, delay, malleate);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("network.delay", e.what());
    }
    if (const auto v = get("network.order")) {
        if (*v == "lifo") {
            sc.network.with_order(NetworkStrategy::ConflictOrder::Lifo);
        } else if (*v != "fifo") {
            throw ConfigError("network.order", "expected fifo or lifo, got '" + *v + "'");
        }
    }

    const auto party = [&](PartyRole role) {
        const std::string prefix = "party." + to_string(role) + ".";
        std::optional<std::string> abort_at = get((prefix + "abort_at").c_str());
        bool withhold = false;
        bool bad_sig = false;
        if (const auto v = get((prefix + "withhold_secret").c_str())) {
            withhold = parse_bool(prefix + "withhold_secret", *v);
        }
        if (const auto v = get((prefix + "send_bad_signature").c_str())) {
            bad_sig = parse_bool(prefix + "send_bad_signature", *v);
        }
        return resolve_party(*protocol, role, abort_at, withhold, bad_sig);
    };
    sc.party_a = party(PartyRole::A);
    sc.party_b = party(PartyRole::B);

    sc.check();
    return sc;
}

} // namespace fusesim
