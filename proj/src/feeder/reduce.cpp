/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/reduce.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include <fmt/core.h>

#include "mgrisk/union_find.hpp"

namespace mgrisk {

namespace {

std::string unique_id(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) return base;
    for (int k = 2;; ++k) {
        std::string id = fmt::format("{}_{}", base, k);
        if (!taken.count(id)) return id;
    }
}

std::set<std::string> all_ids(const NetworkData& d) {
    std::set<std::string> ids;
    for (const auto& e : d.buses) ids.insert(e.id);
    for (const auto& e : d.lines) ids.insert(e.id);
    for (const auto& e : d.switches) ids.insert(e.id);
    for (const auto& e : d.loads) ids.insert(e.id);
    for (const auto& e : d.sources) ids.insert(e.id);
    for (const auto& e : d.transformers) ids.insert(e.id);
    return ids;
}

std::string resolve(const std::map<std::string, std::string>& m, std::string id) {
    for (auto it = m.find(id); it != m.end(); it = m.find(id)) id = it->second;
    return id;
}

}  // namespace

ReductionResult reduce_feeder(const NetworkModel& net) {
    NetworkData d = net.data();
    std::map<std::string, std::string> absorbed;
    std::map<std::string, std::string> load_agg;
    std::vector<std::string> retained;

    std::vector<std::string> order;
    for (const auto& t : d.transformers)
        if (t.is_distribution_xfmr) order.push_back(t.id);

    for (const std::string& xid : order) {
        auto xit = std::find_if(d.transformers.begin(), d.transformers.end(),
                                [&](const TransformerElement& t) { return t.id == xid; });
        if (xit == d.transformers.end()) continue;  // absorbed by an upstream reduction

        std::unordered_map<std::string, std::size_t> bidx;
        for (std::size_t i = 0; i < d.buses.size(); ++i) bidx[d.buses[i].id] = i;
        UnionFind uf(d.buses.size());
        for (const auto& l : d.lines) uf.unite(bidx.at(l.from_bus), bidx.at(l.to_bus));
        for (const auto& s : d.switches) uf.unite(bidx.at(s.from_bus), bidx.at(s.to_bus));
        for (const auto& t : d.transformers)
            if (t.id != xid) uf.unite(bidx.at(t.from_bus), bidx.at(t.to_bus));

        const std::size_t fb = bidx.at(xit->from_bus), tb = bidx.at(xit->to_bus);
        if (uf.find(fb) == uf.find(tb)) {
            retained.push_back(fmt::format("{}: secondary side loops back to the primary; transformer retained", xid));
            continue;
        }
        std::size_t sub = 0;
        for (std::size_t i = 0; i < d.buses.size(); ++i)
            if (d.buses[i].is_substation) sub = i;
        const bool from_is_primary = uf.find(fb) == uf.find(sub);
        const std::size_t primary = from_is_primary ? fb : tb;
        const std::size_t secondary_root = uf.find(from_is_primary ? tb : fb);
        const Bus primary_bus = d.buses[primary];

        std::set<std::string> sec;
        for (std::size_t i = 0; i < d.buses.size(); ++i)
            if (uf.find(i) == secondary_root) sec.insert(d.buses[i].id);

        // Phase connections are preserved verbatim; refuse if the primary bus lacks one.
        bool phases_ok = true;
        for (const auto& l : d.loads)
            if (sec.count(l.bus) && !l.pd.phases.is_subset_of(primary_bus.phases)) phases_ok = false;
        for (const auto& s : d.sources)
            if (sec.count(s.bus) && !s.pmax.phases.is_subset_of(primary_bus.phases)) phases_ok = false;
        if (!phases_ok) {
            retained.push_back(fmt::format("{}: secondary phases not present on primary bus '{}'; transformer retained",
                                           xid, primary_bus.id));
            continue;
        }

        std::set<std::string> taken = all_ids(d);
        LoadPoint agg_load;
        std::vector<std::string> merged_loads;
        std::vector<LoadPoint> keep_loads;
        for (auto& l : d.loads) {
            if (!sec.count(l.bus)) {
                keep_loads.push_back(std::move(l));
                continue;
            }
            for (Phase p : l.pd.phases.phases()) {
                agg_load.pd.add(p, l.pd[p]);
                agg_load.qd.add(p, l.qd[p]);
            }
            agg_load.svi += l.svi;
            merged_loads.push_back(l.id);
        }
        d.loads = std::move(keep_loads);
        if (!merged_loads.empty()) {
            agg_load.id = unique_id(xid + "_load", taken);
            agg_load.bus = primary_bus.id;
            taken.insert(agg_load.id);
            for (const auto& id : merged_loads) load_agg[id] = agg_load.id;
            d.loads.push_back(std::move(agg_load));
        }

        DistributedSource agg_pv;
        agg_pv.kind = SourceKind::solar;
        bool any_pv = false;
        std::vector<DistributedSource> keep_sources;
        for (auto& s : d.sources) {
            if (!sec.count(s.bus)) {
                keep_sources.push_back(std::move(s));
                continue;
            }
            if (s.kind == SourceKind::solar) {
                any_pv = true;
                for (Phase p : s.pmax.phases.phases()) {
                    agg_pv.pmax.add(p, s.pmax[p]);
                    agg_pv.qmin.add(p, s.qmin[p]);
                    agg_pv.qmax.add(p, s.qmax[p]);
                }
                agg_pv.can_grid_form = agg_pv.can_grid_form || s.can_grid_form;
            } else {
                s.bus = primary_bus.id;
                keep_sources.push_back(std::move(s));
            }
        }
        d.sources = std::move(keep_sources);
        if (any_pv) {
            agg_pv.id = unique_id(xid + "_pv", taken);
            agg_pv.bus = primary_bus.id;
            d.sources.push_back(std::move(agg_pv));
        }

        auto drop_edges = [&](auto& vec) {
            using T = typename std::decay_t<decltype(vec)>::value_type;
            std::vector<T> keep;
            for (auto& e : vec) {
                if (sec.count(e.from_bus) || sec.count(e.to_bus))
                    absorbed[e.id] = primary_bus.id;
                else
                    keep.push_back(std::move(e));
            }
            vec = std::move(keep);
        };
        drop_edges(d.lines);
        drop_edges(d.switches);
        drop_edges(d.transformers);
        std::vector<Bus> keep_buses;
        for (auto& b : d.buses) {
            if (sec.count(b.id))
                absorbed[b.id] = primary_bus.id;
            else
                keep_buses.push_back(std::move(b));
        }
        d.buses = std::move(keep_buses);
    }

    // Nested reductions: follow chains to the final surviving element.
    for (auto& [id, target] : absorbed) target = resolve(absorbed, target);
    for (auto& [id, target] : load_agg) target = resolve(load_agg, target);

    return ReductionResult{NetworkModel::from_data(std::move(d)), std::move(absorbed), std::move(load_agg),
                           std::move(retained)};
}

}  // namespace mgrisk
