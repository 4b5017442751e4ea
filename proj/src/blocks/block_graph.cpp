/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/block_graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

#include "mgrisk/union_find.hpp"

namespace mgrisk {

double BlockGraph::total_risk(bool include_switches) const {
    double r = 0.0;
    for (const auto& b : blocks) r += b.risk;
    if (include_switches)
        for (const auto& e : edges) r += e.risk;
    return r;
}

double BlockGraph::total_pd() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.total_pd;
    return s;
}

double BlockGraph::total_svi() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.total_svi;
    return s;
}

void BlockGraph::apply_hazard(const std::vector<double>& block_risk, const std::vector<double>& block_svi,
                              const std::vector<double>& switch_risk) {
    if (block_risk.size() != blocks.size() || block_svi.size() != blocks.size() ||
        switch_risk.size() != edges.size())
        throw std::invalid_argument("apply_hazard: size mismatch");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        blocks[i].risk = block_risk[i];
        blocks[i].total_svi = block_svi[i];
    }
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].risk = switch_risk[i];
}

BlockGraph identify_blocks(const NetworkModel& net) {
    const std::size_t nb = net.buses().size();
    UnionFind uf(nb);
    for (const Edge& e : net.edges())
        if (e.kind != EdgeKind::switch_) uf.unite(e.from, e.to);

    // Group buses by component root, then order components canonically.
    std::vector<std::vector<std::size_t>> comps;
    std::vector<std::size_t> comp_of_root(nb, SIZE_MAX);
    for (std::size_t i = 0; i < nb; ++i) {
        std::size_t r = uf.find(i);
        if (comp_of_root[r] == SIZE_MAX) {
            comp_of_root[r] = comps.size();
            comps.emplace_back();
        }
        comps[comp_of_root[r]].push_back(i);
    }
    const auto& buses = net.buses();
    auto min_id = [&](const std::vector<std::size_t>& c) {
        const std::string* m = &buses[c.front()].id;
        for (std::size_t i : c)
            if (buses[i].id < *m) m = &buses[i].id;
        return *m;
    };
    const std::size_t sub_comp = comp_of_root[uf.find(net.substation_bus())];
    std::vector<std::size_t> order(comps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::string> keys(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) keys[c] = min_id(comps[c]);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if ((x == sub_comp) != (y == sub_comp)) return x == sub_comp;
        return keys[x] < keys[y];
    });

    BlockGraph bg;
    bg.bus_block_.assign(nb, 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
        LoadBlock blk;
        blk.id = static_cast<int>(k + 1);
        blk.buses = comps[order[k]];
        std::sort(blk.buses.begin(), blk.buses.end());
        for (std::size_t b : blk.buses) {
            bg.bus_block_[b] = k;
            blk.bus_ids.push_back(buses[b].id);
            if (buses[b].is_substation) blk.contains_substation = true;
        }
        std::sort(blk.bus_ids.begin(), blk.bus_ids.end());
        bg.blocks.push_back(std::move(blk));
    }

    for (std::size_t l = 0; l < net.loads().size(); ++l) {
        LoadBlock& blk = bg.blocks[bg.bus_block_[net.load_bus(l)]];
        blk.total_pd += net.loads()[l].pd.total();
        blk.total_svi += net.loads()[l].svi;
    }
    const auto& sources = net.sources();
    bg.substation_source_ = net.substation_source();
    for (std::size_t s = 0; s < sources.size(); ++s) {
        const std::size_t k = bg.bus_block_[net.source_bus(s)];
        bg.source_block_.push_back(k);
        bg.forming_capable_.push_back(sources[s].forming_capable() ? 1 : 0);
        bg.source_ids_.push_back(sources[s].id);
        if (sources[s].forming_capable()) {
            bg.blocks[k].forming_capable_sources.push_back(sources[s].id);
            bg.blocks[k].forming_sources.push_back(s);
        }
    }

    for (std::size_t s = 0; s < net.switches().size(); ++s) {
        const Edge& e = net.edges()[net.edge_of_switch(s)];
        const auto& sw = net.switches()[s];
        bg.edges.push_back(BlockEdge{sw.id, s, bg.bus_block_[e.from], bg.bus_block_[e.to], sw.risk});
    }
    return bg;
}

IslandSet islands_for(const BlockGraph& bg, const std::vector<char>& closed, const std::vector<char>& forming) {
    const std::size_t n = bg.size();
    if (closed.size() != bg.edges.size() || forming.size() != bg.source_count())
        throw std::invalid_argument("islands_for: state vector size mismatch");

    IslandSet out;
    UnionFind uf(n);
    for (std::size_t i = 0; i < bg.edges.size(); ++i) {
        if (!closed[i]) continue;
        if (!uf.unite(bg.edges[i].a, bg.edges[i].b) && out.status == TopologyStatus::ok) {
            out.status = TopologyStatus::cycle;
            out.reason = fmt::format("closing switch '{}' creates a cycle", bg.edges[i].switch_id);
        }
    }
    std::vector<std::size_t> island_of(n, SIZE_MAX);
    for (std::size_t b = 0; b < n; ++b) {
        const std::size_t r = uf.find(b);
        if (island_of[r] == SIZE_MAX) {
            island_of[r] = out.islands.size();
            out.islands.emplace_back();
        }
        island_of[b] = island_of[r];
        out.islands[island_of[b]].blocks.push_back(b);
    }
    for (std::size_t i = 0; i < bg.edges.size(); ++i)
        if (closed[i]) out.islands[island_of[bg.edges[i].a]].switches.push_back(i);

    for (std::size_t s = 0; s < forming.size(); ++s) {
        if (!forming[s]) continue;
        if (!bg.is_forming_capable(s))
            throw std::invalid_argument(fmt::format("source '{}' cannot be grid-forming", bg.source_id(s)));
        Island& isl = out.islands[island_of[bg.block_of_source(s)]];
        if (isl.forming_source) {
            if (out.status == TopologyStatus::ok) {
                out.status = TopologyStatus::multiple_forming;
                out.reason = fmt::format("sources '{}' and '{}' are both grid-forming in one island",
                                         bg.source_id(*isl.forming_source), bg.source_id(s));
            }
            continue;
        }
        isl.forming_source = s;
    }
    return out;
}

IslandSet islands_for(const BlockGraph& bg, const std::map<std::string, bool>& switch_closed,
                      const std::set<std::string>& forming) {
    std::vector<char> closed(bg.edges.size(), 0);
    for (const auto& [id, state] : switch_closed) {
        auto it = std::find_if(bg.edges.begin(), bg.edges.end(),
                               [&](const BlockEdge& e) { return e.switch_id == id; });
        if (it == bg.edges.end()) throw std::invalid_argument(fmt::format("unknown switch '{}'", id));
        closed[static_cast<std::size_t>(it - bg.edges.begin())] = state ? 1 : 0;
    }
    std::vector<char> form(bg.source_count(), 0);
    for (const auto& id : forming) {
        bool found = false;
        for (std::size_t s = 0; s < bg.source_count(); ++s) {
            if (bg.source_id(s) != id) continue;
            form[s] = 1;
            found = true;
        }
        if (!found) throw std::invalid_argument(fmt::format("unknown source '{}'", id));
    }
    return islands_for(bg, closed, form);
}

}  // namespace mgrisk
