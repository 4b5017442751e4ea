/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/network.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include <fmt/core.h>

#include "mgrisk/union_find.hpp"

namespace mgrisk {

char to_char(Phase p) { return static_cast<char>('a' + index_of(p)); }

std::optional<Phase> phase_from_string(std::string_view s) {
    if (s == "a") return Phase::a;
    if (s == "b") return Phase::b;
    if (s == "c") return Phase::c;
    return std::nullopt;
}

std::vector<Phase> PhaseSet::phases() const {
    std::vector<Phase> out;
    for (Phase p : kAllPhases)
        if (contains(p)) out.push_back(p);
    return out;
}

std::string PhaseSet::to_string() const {
    std::string s;
    for (Phase p : kAllPhases)
        if (contains(p)) s.push_back(to_char(p));
    return s;
}

bool PhaseMatrix::is_symmetric(double tol) const {
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
}

std::string_view to_string(SourceKind k) {
    switch (k) {
        case SourceKind::solar: return "solar";
        case SourceKind::storage: return "storage";
        case SourceKind::generator: return "generator";
        case SourceKind::substation_source: return "substation_source";
    }
    return "solar";
}

std::optional<SourceKind> source_kind_from_string(std::string_view s) {
    if (s == "solar") return SourceKind::solar;
    if (s == "storage") return SourceKind::storage;
    if (s == "generator") return SourceKind::generator;
    if (s == "substation_source") return SourceKind::substation_source;
    return std::nullopt;
}

namespace {

[[noreturn]] void fail(NetworkErrorKind kind, const std::string& msg) { throw NetworkError(kind, msg); }

void require(bool cond, NetworkErrorKind kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

NetworkModel NetworkModel::from_data(NetworkData data) {
    using K = NetworkErrorKind;
    require(std::isfinite(data.base_kv) && data.base_kv > 0, K::invalid_value, "base_kv must be positive");
    require(std::isfinite(data.base_kva) && data.base_kva > 0, K::invalid_value, "base_kva must be positive");

    std::set<std::string, std::less<>> ids;
    auto claim = [&](const std::string& id, std::string_view what) {
        require(!id.empty(), K::schema, fmt::format("{} with empty id", what));
        require(ids.insert(id).second, K::duplicate_id, fmt::format("duplicate id '{}' ({})", id, what));
    };

    NetworkModel m;
    std::size_t substations = 0;
    for (std::size_t i = 0; i < data.buses.size(); ++i) {
        const Bus& b = data.buses[i];
        claim(b.id, "bus");
        m.bus_ids_.emplace(b.id, i);
        require(!b.phases.empty(), K::invalid_value, fmt::format("bus '{}': phases must be nonempty", b.id));
        require(std::isfinite(b.vmin) && std::isfinite(b.vmax) && b.vmin > 0 && b.vmin <= b.vmax,
                K::invalid_value, fmt::format("bus '{}': require 0 < vmin <= vmax", b.id));
        if (b.is_substation) {
            ++substations;
            m.substation_ = i;
        }
    }
    require(substations > 0, K::schema, "no bus has is_substation = true");
    require(substations == 1, K::multiple_substations,
            fmt::format("{} buses have is_substation = true; exactly one allowed", substations));

    auto bus_of = [&](const std::string& id, std::string_view owner, std::string_view field) {
        auto it = m.bus_ids_.find(id);
        if (it == m.bus_ids_.end())
            fail(K::dangling_reference, fmt::format("{}: {} references unknown bus '{}'", owner, field, id));
        return it->second;
    };
    auto phases_on = [&](PhaseSet ph, std::size_t bus, const std::string& owner) {
        require(ph.is_subset_of(data.buses[bus].phases), K::invalid_value,
                fmt::format("{}: phases '{}' not available on bus '{}'", owner, ph.to_string(),
                            data.buses[bus].id));
    };

    for (const LineSegment& l : data.lines) {
        claim(l.id, "line");
        std::string owner = "line '" + l.id + "'";
        std::size_t f = bus_of(l.from_bus, owner, "from_bus");
        std::size_t t = bus_of(l.to_bus, owner, "to_bus");
        require(f != t, K::invalid_value, owner + ": from_bus equals to_bus");
        require(!l.phases.empty(), K::invalid_value, owner + ": phases must be nonempty");
        phases_on(l.phases, f, owner);
        phases_on(l.phases, t, owner);
        const int n = l.phases.size();
        require(l.r.dim == n && l.x.dim == n, K::schema,
                fmt::format("{}: r and x must be {}x{} to match phases '{}'", owner, n, n, l.phases.to_string()));
        for (double v : l.r.values) require(std::isfinite(v), K::invalid_value, owner + ": non-finite r");
        for (double v : l.x.values) require(std::isfinite(v), K::invalid_value, owner + ": non-finite x");
        require(l.r.is_symmetric() && l.x.is_symmetric(), K::invalid_value, owner + ": r and x must be symmetric");
        require(finite_nonneg(l.s_max), K::invalid_value, owner + ": s_max must be >= 0");
        require(finite_nonneg(l.length), K::invalid_value, owner + ": length must be >= 0");
    }
    for (const SwitchElement& s : data.switches) {
        claim(s.id, "switch");
        std::string owner = "switch '" + s.id + "'";
        std::size_t f = bus_of(s.from_bus, owner, "from_bus");
        std::size_t t = bus_of(s.to_bus, owner, "to_bus");
        require(f != t, K::invalid_value, owner + ": from_bus equals to_bus");
        require(!s.phases.empty(), K::invalid_value, owner + ": phases must be nonempty");
        phases_on(s.phases, f, owner);
        phases_on(s.phases, t, owner);
        require(finite_nonneg(s.risk), K::invalid_value, owner + ": risk must be >= 0");
        require(finite_nonneg(s.s_max), K::invalid_value, owner + ": s_max must be >= 0");
    }
    for (const LoadPoint& l : data.loads) {
        claim(l.id, "load");
        std::string owner = "load '" + l.id + "'";
        std::size_t b = bus_of(l.bus, owner, "bus");
        require(!l.pd.phases.empty(), K::invalid_value, owner + ": pd must name at least one phase");
        phases_on(l.pd.phases, b, owner);
        require(l.qd.phases.is_subset_of(l.pd.phases), K::invalid_value, owner + ": qd phases must be a subset of pd phases");
        for (Phase p : kAllPhases) {
            require(finite_nonneg(l.pd[p]), K::invalid_value, owner + ": pd must be >= 0");
            require(std::isfinite(l.qd[p]), K::invalid_value, owner + ": non-finite qd");
        }
        require(finite_nonneg(l.svi), K::invalid_value, owner + ": svi must be >= 0");
    }
    std::size_t substation_sources = 0;
    for (std::size_t i = 0; i < data.sources.size(); ++i) {
        const DistributedSource& s = data.sources[i];
        claim(s.id, "source");
        std::string owner = "source '" + s.id + "'";
        std::size_t b = bus_of(s.bus, owner, "bus");
        require(!s.pmax.phases.empty(), K::invalid_value, owner + ": pmax must name at least one phase");
        phases_on(s.pmax.phases, b, owner);
        require(s.qmin.phases.is_subset_of(s.pmax.phases) && s.qmax.phases.is_subset_of(s.pmax.phases),
                K::invalid_value, owner + ": qmin/qmax phases must be a subset of pmax phases");
        for (Phase p : kAllPhases) {
            require(finite_nonneg(s.pmax[p]), K::invalid_value, owner + ": pmax must be >= 0");
            require(std::isfinite(s.qmin[p]) && std::isfinite(s.qmax[p]) && s.qmin[p] <= s.qmax[p],
                    K::invalid_value, owner + ": require qmin <= qmax");
        }
        if (s.kind == SourceKind::substation_source) {
            ++substation_sources;
            require(b == m.substation_, K::invalid_value, owner + ": substation_source must sit on the substation bus");
            m.substation_source_ = i;
        }
    }
    require(substation_sources <= 1, K::invalid_value, "at most one substation_source allowed");
    for (const TransformerElement& t : data.transformers) {
        claim(t.id, "transformer");
        std::string owner = "transformer '" + t.id + "'";
        std::size_t f = bus_of(t.from_bus, owner, "from_bus");
        std::size_t to = bus_of(t.to_bus, owner, "to_bus");
        require(f != to, K::invalid_value, owner + ": from_bus equals to_bus");
        require(!(data.buses[f].phases & data.buses[to].phases).empty(), K::invalid_value,
                owner + ": buses share no phase");
    }

    m.data_ = std::move(data);
    m.index();

    // Connectivity over all elements, radiality with switches removed.
    const std::size_t nb = m.data_.buses.size();
    UnionFind all(nb), fixed(nb);
    for (const Edge& e : m.edges_) {
        all.unite(e.from, e.to);
        if (e.kind == EdgeKind::switch_) continue;
        if (!fixed.unite(e.from, e.to)) {
            std::string id = e.kind == EdgeKind::line ? m.data_.lines[e.element].id
                                                      : m.data_.transformers[e.element].id;
            fail(K::non_radial,
                 fmt::format("non-radial block: '{}' closes a loop with all switches open", id));
        }
    }
    for (std::size_t i = 0; i < nb; ++i)
        require(all.find(i) == all.find(m.substation_), K::disconnected,
                fmt::format("bus '{}' is not connected to the substation", m.data_.buses[i].id));
    return m;
}

void NetworkModel::index() {
    const std::size_t nb = data_.buses.size();
    edges_.clear();
    for (std::size_t i = 0; i < data_.lines.size(); ++i) {
        const auto& l = data_.lines[i];
        edges_.push_back({EdgeKind::line, i, *bus_index(l.from_bus), *bus_index(l.to_bus), l.phases});
    }
    for (std::size_t i = 0; i < data_.switches.size(); ++i) {
        const auto& s = data_.switches[i];
        edges_.push_back({EdgeKind::switch_, i, *bus_index(s.from_bus), *bus_index(s.to_bus), s.phases});
    }
    for (std::size_t i = 0; i < data_.transformers.size(); ++i) {
        const auto& t = data_.transformers[i];
        std::size_t f = *bus_index(t.from_bus), to = *bus_index(t.to_bus);
        edges_.push_back({EdgeKind::transformer, i, f, to, data_.buses[f].phases & data_.buses[to].phases});
    }
    loads_at_.assign(nb, {});
    sources_at_.assign(nb, {});
    load_bus_.clear();
    source_bus_.clear();
    for (std::size_t i = 0; i < data_.loads.size(); ++i) {
        std::size_t b = *bus_index(data_.loads[i].bus);
        loads_at_[b].push_back(i);
        load_bus_.push_back(b);
    }
    for (std::size_t i = 0; i < data_.sources.size(); ++i) {
        std::size_t b = *bus_index(data_.sources[i].bus);
        sources_at_[b].push_back(i);
        source_bus_.push_back(b);
    }
}

std::optional<std::size_t> NetworkModel::bus_index(std::string_view id) const {
    auto it = bus_ids_.find(id);
    if (it == bus_ids_.end()) return std::nullopt;
    return it->second;
}

double NetworkModel::total_pd() const {
    double s = 0;
    for (const auto& l : data_.loads) s += l.pd.total();
    return s;
}

double NetworkModel::total_qd() const {
    double s = 0;
    for (const auto& l : data_.loads) s += l.qd.total();
    return s;
}

double NetworkModel::total_svi() const {
    double s = 0;
    for (const auto& l : data_.loads) s += l.svi;
    return s;
}

}  // namespace mgrisk
