/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/network_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "json.hpp"

namespace mgrisk {

using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& msg) {
    throw NetworkError(NetworkErrorKind::schema, fmt::format("{}: {}", where, msg));
}

const ojson& field(const ojson& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(where, fmt::format("missing field '{}'", key));
    return *it;
}

std::string get_string(const ojson& obj, const char* key, const std::string& where) {
    const ojson& v = field(obj, key, where);
    if (!v.is_string()) schema_error(where + "." + key, "expected string");
    return v.get<std::string>();
}

double get_number(const ojson& v, const std::string& where) {
    if (!v.is_number()) schema_error(where, "expected number");
    return v.get<double>();
}

double get_number(const ojson& obj, const char* key, const std::string& where) {
    return get_number(field(obj, key, where), where + "." + key);
}

double get_number_or(const ojson& obj, const char* key, double fallback, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return get_number(*it, where + "." + key);
}

bool get_bool_or(const ojson& obj, const char* key, bool fallback, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) schema_error(where + "." + key, "expected boolean");
    return it->get<bool>();
}

Phase to_phase(const std::string& s, const std::string& where) {
    auto p = phase_from_string(s);
    if (!p) schema_error(where, fmt::format("unknown phase '{}' (expected \"a\", \"b\" or \"c\")", s));
    return *p;
}

PhaseSet get_phases(const ojson& obj, const std::string& where) {
    const ojson& v = field(obj, "phases", where);
    if (!v.is_array()) schema_error(where + ".phases", "expected array of phase strings");
    PhaseSet s;
    for (const auto& e : v) {
        if (!e.is_string()) schema_error(where + ".phases", "expected array of phase strings");
        Phase p = to_phase(e.get<std::string>(), where + ".phases");
        if (s.contains(p)) schema_error(where + ".phases", "repeated phase");
        s.insert(p);
    }
    return s;
}

PhaseValues get_phase_values(const ojson& obj, const char* key, const std::string& where, bool required) {
    PhaseValues out;
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (required) schema_error(where, fmt::format("missing field '{}'", key));
        return out;
    }
    std::string w = where + "." + key;
    if (!it->is_object()) schema_error(w, "expected object keyed by phase");
    for (const auto& [k, v] : it->items()) out.set(to_phase(k, w), get_number(v, w + "." + k));
    return out;
}

PhaseMatrix get_matrix(const ojson& obj, const char* key, const std::string& where) {
    std::string w = where + "." + key;
    const ojson& v = field(obj, key, where);
    if (!v.is_array()) schema_error(w, "expected row-major array of arrays");
    const int n = static_cast<int>(v.size());
    PhaseMatrix m(n);
    for (int i = 0; i < n; ++i) {
        const ojson& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            schema_error(w, fmt::format("row {} must be an array of length {}", i, n));
        for (int j = 0; j < n; ++j) m(i, j) = get_number(row[static_cast<std::size_t>(j)], w);
    }
    return m;
}

const ojson& get_array(const ojson& root, const char* key) {
    auto it = root.find(key);
    static const ojson empty = ojson::array();
    if (it == root.end()) return empty;
    if (!it->is_array()) schema_error(key, "expected array");
    return *it;
}

std::string at(const char* arr, std::size_t i) { return fmt::format("{}[{}]", arr, i); }

ojson phases_json(PhaseSet s) {
    ojson a = ojson::array();
    for (Phase p : s.phases()) a.push_back(std::string(1, to_char(p)));
    return a;
}

ojson values_json(const PhaseValues& v, PhaseSet over) {
    ojson o = ojson::object();
    for (Phase p : over.phases()) o[std::string(1, to_char(p))] = v[p];
    return o;
}

ojson matrix_json(const PhaseMatrix& m) {
    ojson a = ojson::array();
    for (int i = 0; i < m.dim; ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < m.dim; ++j) row.push_back(m(i, j));
        a.push_back(std::move(row));
    }
    return a;
}

}  // namespace

NetworkModel parse_network_json(std::string_view text) {
    ojson root;
    try {
        root = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        schema_error("network", fmt::format("malformed JSON ({})", e.what()));
    }
    if (!root.is_object()) schema_error("network", "top level must be an object");

    NetworkData d;
    d.base_kv = get_number(root, "base_kv", "network");
    d.base_kva = get_number(root, "base_kva", "network");

    const ojson& buses = get_array(root, "buses");
    for (std::size_t i = 0; i < buses.size(); ++i) {
        const ojson& o = buses[i];
        std::string w = at("buses", i);
        Bus b;
        b.id = get_string(o, "id", w);
        b.phases = get_phases(o, w);
        b.vmin = get_number_or(o, "vmin", b.vmin, w);
        b.vmax = get_number_or(o, "vmax", b.vmax, w);
        b.is_substation = get_bool_or(o, "is_substation", false, w);
        if (auto it = o.find("metadata"); it != o.end()) b.metadata = it->dump();
        d.buses.push_back(std::move(b));
    }
    const ojson& lines = get_array(root, "lines");
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const ojson& o = lines[i];
        std::string w = at("lines", i);
        LineSegment l;
        l.id = get_string(o, "id", w);
        l.from_bus = get_string(o, "from_bus", w);
        l.to_bus = get_string(o, "to_bus", w);
        l.phases = get_phases(o, w);
        l.r = get_matrix(o, "r", w);
        l.x = get_matrix(o, "x", w);
        l.s_max = get_number(o, "s_max", w);
        l.length = get_number_or(o, "length", 0.0, w);
        d.lines.push_back(std::move(l));
    }
    const ojson& switches = get_array(root, "switches");
    for (std::size_t i = 0; i < switches.size(); ++i) {
        const ojson& o = switches[i];
        std::string w = at("switches", i);
        SwitchElement s;
        s.id = get_string(o, "id", w);
        s.from_bus = get_string(o, "from_bus", w);
        s.to_bus = get_string(o, "to_bus", w);
        s.phases = get_phases(o, w);
        s.normally_open = get_bool_or(o, "normally_open", false, w);
        s.risk = get_number_or(o, "risk", 0.0, w);
        s.s_max = get_number(o, "s_max", w);
        d.switches.push_back(std::move(s));
    }
    const ojson& loads = get_array(root, "loads");
    for (std::size_t i = 0; i < loads.size(); ++i) {
        const ojson& o = loads[i];
        std::string w = at("loads", i);
        LoadPoint l;
        l.id = get_string(o, "id", w);
        l.bus = get_string(o, "bus", w);
        l.pd = get_phase_values(o, "pd", w, true);
        l.qd = get_phase_values(o, "qd", w, false);
        if (!l.qd.phases.is_subset_of(l.pd.phases))
            schema_error(w + ".qd", "phases must be a subset of pd phases");
        l.qd.phases = l.pd.phases;
        l.svi = get_number_or(o, "svi", 0.0, w);
        d.loads.push_back(std::move(l));
    }
    const ojson& sources = get_array(root, "sources");
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const ojson& o = sources[i];
        std::string w = at("sources", i);
        DistributedSource s;
        s.id = get_string(o, "id", w);
        s.bus = get_string(o, "bus", w);
        s.pmax = get_phase_values(o, "pmax", w, true);
        s.qmin = get_phase_values(o, "qmin", w, false);
        s.qmax = get_phase_values(o, "qmax", w, false);
        if (!s.qmin.phases.is_subset_of(s.pmax.phases) || !s.qmax.phases.is_subset_of(s.pmax.phases))
            schema_error(w, "qmin/qmax phases must be a subset of pmax phases");
        s.qmin.phases = s.pmax.phases;
        s.qmax.phases = s.pmax.phases;
        s.can_grid_form = get_bool_or(o, "can_grid_form", false, w);
        std::string kind = get_string(o, "kind", w);
        auto k = source_kind_from_string(kind);
        if (!k) schema_error(w + ".kind", fmt::format("unknown kind '{}'", kind));
        s.kind = *k;
        d.sources.push_back(std::move(s));
    }
    const ojson& xfmrs = get_array(root, "transformers");
    for (std::size_t i = 0; i < xfmrs.size(); ++i) {
        const ojson& o = xfmrs[i];
        std::string w = at("transformers", i);
        TransformerElement t;
        t.id = get_string(o, "id", w);
        t.from_bus = get_string(o, "from_bus", w);
        t.to_bus = get_string(o, "to_bus", w);
        t.is_distribution_xfmr = get_bool_or(o, "is_distribution_xfmr", false, w);
        d.transformers.push_back(std::move(t));
    }
    return NetworkModel::from_data(std::move(d));
}

NetworkModel parse_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) schema_error(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network_json(ss.str());
}

std::string serialize_network(const NetworkModel& net) {
    ojson root;
    root["base_kv"] = net.base_kv();
    root["base_kva"] = net.base_kva();
    ojson buses = ojson::array();
    for (const Bus& b : net.buses()) {
        ojson o;
        o["id"] = b.id;
        o["phases"] = phases_json(b.phases);
        o["vmin"] = b.vmin;
        o["vmax"] = b.vmax;
        o["is_substation"] = b.is_substation;
        if (!b.metadata.empty()) o["metadata"] = ojson::parse(b.metadata);
        buses.push_back(std::move(o));
    }
    root["buses"] = std::move(buses);
    ojson lines = ojson::array();
    for (const LineSegment& l : net.lines()) {
        ojson o;
        o["id"] = l.id;
        o["from_bus"] = l.from_bus;
        o["to_bus"] = l.to_bus;
        o["phases"] = phases_json(l.phases);
        o["r"] = matrix_json(l.r);
        o["x"] = matrix_json(l.x);
        o["s_max"] = l.s_max;
        o["length"] = l.length;
        lines.push_back(std::move(o));
    }
    root["lines"] = std::move(lines);
    ojson switches = ojson::array();
    for (const SwitchElement& s : net.switches()) {
        ojson o;
        o["id"] = s.id;
        o["from_bus"] = s.from_bus;
        o["to_bus"] = s.to_bus;
        o["phases"] = phases_json(s.phases);
        o["normally_open"] = s.normally_open;
        o["risk"] = s.risk;
        o["s_max"] = s.s_max;
        switches.push_back(std::move(o));
    }
    root["switches"] = std::move(switches);
    ojson loads = ojson::array();
    for (const LoadPoint& l : net.loads()) {
        ojson o;
        o["id"] = l.id;
        o["bus"] = l.bus;
        o["pd"] = values_json(l.pd, l.pd.phases);
        o["qd"] = values_json(l.qd, l.pd.phases);
        o["svi"] = l.svi;
        loads.push_back(std::move(o));
    }
    root["loads"] = std::move(loads);
    ojson sources = ojson::array();
    for (const DistributedSource& s : net.sources()) {
        ojson o;
        o["id"] = s.id;
        o["bus"] = s.bus;
        o["pmax"] = values_json(s.pmax, s.pmax.phases);
        o["qmin"] = values_json(s.qmin, s.pmax.phases);
        o["qmax"] = values_json(s.qmax, s.pmax.phases);
        o["can_grid_form"] = s.can_grid_form;
        o["kind"] = std::string(to_string(s.kind));
        sources.push_back(std::move(o));
    }
    root["sources"] = std::move(sources);
    ojson xfmrs = ojson::array();
    for (const TransformerElement& t : net.transformers()) {
        ojson o;
        o["id"] = t.id;
        o["from_bus"] = t.from_bus;
        o["to_bus"] = t.to_bus;
        o["is_distribution_xfmr"] = t.is_distribution_xfmr;
        xfmrs.push_back(std::move(o));
    }
    root["transformers"] = std::move(xfmrs);
    return root.dump(2) + "\n";
}

void write_network(const NetworkModel& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize_network(net);
}

}  // namespace mgrisk
