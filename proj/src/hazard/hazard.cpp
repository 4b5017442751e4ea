/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/hazard.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>

namespace mgrisk {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::map<std::string, double> parse_id_value(std::string_view text, const char* what) {
    std::map<std::string, double> out;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
            if (line != "id,value")
                throw HazardError(fmt::format("{} csv: expected header 'id,value', got '{}'", what, line));
            header_seen = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
            throw HazardError(fmt::format("{} csv line {}: expected two fields", what, line_no));
        const std::string id(trim(line.substr(0, comma)));
        const std::string_view num = trim(line.substr(comma + 1));
        if (id.empty()) throw HazardError(fmt::format("{} csv line {}: empty id", what, line_no));
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
        if (ec != std::errc{} || ptr != num.data() + num.size() || !std::isfinite(v))
            throw HazardError(fmt::format("{} csv line {}: bad value '{}'", what, line_no, num));
        if (v < 0) throw HazardError(fmt::format("{} csv line {}: negative value for '{}'", what, line_no, id));
        if (!out.emplace(id, v).second)
            throw HazardError(fmt::format("{} csv line {}: duplicate id '{}'", what, line_no, id));
    }
    if (!header_seen) throw HazardError(fmt::format("{} csv: missing header 'id,value'", what));
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw HazardError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string join(const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) {
        if (!s.empty()) s += ", ";
        s += id;
    }
    return s;
}

}  // namespace

RiskTable parse_risk_csv(std::string_view text) {
    RiskTable t;
    t.values = parse_id_value(text, "risk");
    for (const auto& [id, v] : t.values)
        if (v > 150.0) t.warnings.push_back(fmt::format("risk for '{}' is {} (outside the 0..150 index range)", id, v));
    return t;
}

SviTable parse_svi_csv(std::string_view text) {
    SviTable t;
    t.values = parse_id_value(text, "svi");
    return t;
}

RiskTable load_risk_csv(const std::filesystem::path& path) { return parse_risk_csv(read_file(path)); }
SviTable load_svi_csv(const std::filesystem::path& path) { return parse_svi_csv(read_file(path)); }

std::vector<double> RiskAggregation::block_risk(const NetworkModel& net, const BlockGraph& bg) const {
    std::vector<double> rho(bg.size(), 0.0);
    for (std::size_t b = 0; b < bus.size(); ++b) {
        double& r = rho[bg.block_of_bus(b)];
        r = std::max(r, bus[b]);
    }
    for (const Edge& e : net.edges()) {
        double v = 0.0;
        if (e.kind == EdgeKind::line) v = line[e.element];
        else if (e.kind == EdgeKind::transformer) v = transformer[e.element];
        else continue;
        double& r = rho[bg.block_of_bus(e.from)];
        r = std::max(r, v);
    }
    return rho;
}

RiskAggregation aggregate_risk(const NetworkModel& net, const RiskTable& rt,
                               const std::map<std::string, std::string>& absorbed) {
    RiskAggregation agg;
    agg.bus.assign(net.buses().size(), 0.0);
    agg.line.assign(net.lines().size(), 0.0);
    agg.switch_.assign(net.switches().size(), 0.0);
    agg.transformer.assign(net.transformers().size(), 0.0);

    std::map<std::string, std::pair<int, std::size_t>> ids;  // kind: 0 bus, 1 line, 2 switch, 3 xfmr
    for (std::size_t i = 0; i < net.buses().size(); ++i) ids[net.buses()[i].id] = {0, i};
    for (std::size_t i = 0; i < net.lines().size(); ++i) ids[net.lines()[i].id] = {1, i};
    for (std::size_t i = 0; i < net.switches().size(); ++i) ids[net.switches()[i].id] = {2, i};
    for (std::size_t i = 0; i < net.transformers().size(); ++i) ids[net.transformers()[i].id] = {3, i};

    std::vector<char> line_seen(net.lines().size(), 0), sw_seen(net.switches().size(), 0);
    std::vector<std::string> unknown;
    for (const auto& [id, v] : rt.values) {
        auto it = ids.find(id);
        if (it == ids.end()) {
            auto ab = absorbed.find(id);
            auto bi = ab == absorbed.end() ? std::nullopt : net.bus_index(ab->second);
            if (!bi) {
                unknown.push_back(id);
                continue;
            }
            agg.bus[*bi] = std::max(agg.bus[*bi], v);
            continue;
        }
        auto [kind, idx] = it->second;
        switch (kind) {
            case 0: agg.bus[idx] = std::max(agg.bus[idx], v); break;
            case 1: agg.line[idx] = v; line_seen[idx] = 1; break;
            case 2: agg.switch_[idx] = v; sw_seen[idx] = 1; break;
            default: agg.transformer[idx] = v; break;
        }
    }
    if (!unknown.empty()) throw HazardError("risk csv: ids not present in the network: " + join(unknown));
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < line_seen.size(); ++i)
        if (!line_seen[i]) missing.push_back(net.lines()[i].id);
    for (std::size_t i = 0; i < sw_seen.size(); ++i)
        if (!sw_seen[i]) missing.push_back(net.switches()[i].id);
    if (!missing.empty()) throw HazardError("risk csv: missing entries for: " + join(missing));
    return agg;
}

std::vector<double> aggregate_svi(const NetworkModel& net, const BlockGraph& bg, const SviTable& st,
                                  const std::map<std::string, std::string>& load_aggregate) {
    std::map<std::string, std::size_t> load_idx;
    for (std::size_t i = 0; i < net.loads().size(); ++i) load_idx[net.loads()[i].id] = i;

    std::vector<double> per_load(net.loads().size(), 0.0);
    std::vector<char> seen(net.loads().size(), 0);
    std::vector<std::string> unknown;
    for (const auto& [id, v] : st.values) {
        auto it = load_idx.find(id);
        if (it == load_idx.end()) {
            auto ag = load_aggregate.find(id);
            if (ag != load_aggregate.end()) it = load_idx.find(ag->second);
        }
        if (it == load_idx.end()) {
            unknown.push_back(id);
            continue;
        }
        per_load[it->second] += v;
        seen[it->second] = 1;
    }
    if (!unknown.empty()) throw HazardError("svi csv: ids not present in the network: " + join(unknown));
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) missing.push_back(net.loads()[i].id);
    if (!missing.empty()) throw HazardError("svi csv: missing entries for: " + join(missing));

    std::vector<double> v(bg.size(), 0.0);
    for (std::size_t i = 0; i < per_load.size(); ++i) v[bg.block_of_bus(net.load_bus(i))] += per_load[i];
    return v;
}

RiskTable remap_risk(const RiskTable& rt, const std::map<std::string, std::string>& absorbed) {
    RiskTable out;
    out.warnings = rt.warnings;
    for (const auto& [id, x] : rt.values) {
        auto it = absorbed.find(id);
        const std::string& key = it == absorbed.end() ? id : it->second;
        auto [slot, fresh] = out.values.emplace(key, x);
        if (!fresh) slot->second = std::max(slot->second, x);
    }
    return out;
}

SviTable remap_svi(const SviTable& st, const std::map<std::string, std::string>& load_aggregate) {
    SviTable out;
    out.warnings = st.warnings;
    for (const auto& [id, x] : st.values) {
        auto it = load_aggregate.find(id);
        out.values[it == load_aggregate.end() ? id : it->second] += x;
    }
    return out;
}

}  // namespace mgrisk
