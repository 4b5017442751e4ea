/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/omcp.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrisk {

std::string_view to_string(Controllability c) {
    switch (c) {
        case Controllability::no_microgrids: return "NoMicrogrids";
        case Controllability::static_microgrids: return "StaticMicrogrids";
        case Controllability::expanding_microgrids: return "ExpandingMicrogrids";
        case Controllability::networking_microgrids: return "NetworkingMicrogrids";
    }
    return "";
}

std::string_view to_string(Objective o) {
    switch (o) {
        case Objective::load_only: return "LoadOnly";
        case Objective::vulnerability_only: return "VulnerabilityOnly";
        case Objective::vulnerability_weighted: return "VulnerabilityWeighted";
    }
    return "";
}

std::string_view short_name(Controllability c) {
    switch (c) {
        case Controllability::no_microgrids: return "none";
        case Controllability::static_microgrids: return "static";
        case Controllability::expanding_microgrids: return "expanding";
        case Controllability::networking_microgrids: return "networking";
    }
    return "";
}

std::string_view short_name(Objective o) {
    switch (o) {
        case Objective::load_only: return "lo";
        case Objective::vulnerability_only: return "vo";
        case Objective::vulnerability_weighted: return "vl";
    }
    return "";
}

std::optional<Controllability> controllability_from_string(std::string_view s) {
    if (s == "none") return Controllability::no_microgrids;
    if (s == "static") return Controllability::static_microgrids;
    if (s == "expanding") return Controllability::expanding_microgrids;
    if (s == "networking") return Controllability::networking_microgrids;
    return std::nullopt;
}

std::optional<Objective> objective_from_string(std::string_view s) {
    if (s == "lo") return Objective::load_only;
    if (s == "vo") return Objective::vulnerability_only;
    if (s == "vl") return Objective::vulnerability_weighted;
    return std::nullopt;
}

double block_coefficient(const LoadBlock& b, Objective obj) {
    switch (obj) {
        case Objective::load_only: return b.total_pd;
        case Objective::vulnerability_only: return b.total_svi;
        case Objective::vulnerability_weighted: return b.total_pd * b.total_svi / 1000.0;
    }
    return 0.0;
}

std::size_t OmcpInstance::free_binaries() const {
    std::size_t n = 0;
    for (Domain d : switch_domain) n += d == Domain::free;
    for (Domain d : inverter_domain) n += d == Domain::free;
    return n;
}

std::vector<std::optional<std::size_t>> designated_sources(const NetworkModel& net, const BlockGraph& bg,
                                                           bool substation_off) {
    std::vector<std::optional<std::size_t>> out(bg.size());
    const auto& src = net.sources();
    for (std::size_t b = 0; b < bg.size(); ++b) {
        for (std::size_t s : bg.blocks[b].forming_sources) {
            if (substation_off && src[s].kind == SourceKind::substation_source) continue;
            if (!out[b]) {
                out[b] = s;
                continue;
            }
            const auto& cur = src[*out[b]];
            // The substation stays the reference of its block whenever it is on.
            const bool s_sub = src[s].kind == SourceKind::substation_source;
            const bool c_sub = cur.kind == SourceKind::substation_source;
            if (s_sub != c_sub) {
                if (s_sub) out[b] = s;
                continue;
            }
            const double ps = src[s].pmax.total(), pc = cur.pmax.total();
            if (ps > pc || (ps == pc && src[s].id < cur.id)) out[b] = s;
        }
    }
    return out;
}

OmcpInstance make_instance(std::shared_ptr<const NetworkModel> net, BlockGraph bg, Objective obj,
                           Controllability ctrl, double threshold, const InstanceOptions& opt) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::invalid_argument(fmt::format("risk threshold {} outside [0, 1]", threshold));
    OmcpInstance inst;
    inst.policy.threshold = threshold;
    inst.policy.include_switch_risk = opt.include_switch_risk;
    inst.policy.total = bg.total_risk(opt.include_switch_risk);
    if (!(inst.policy.total > 0.0)) throw std::invalid_argument("total wildfire risk must be positive");
    inst.objective = obj;
    inst.controllability = ctrl;
    inst.substation_off = opt.substation_off;

    const std::size_t ns = net->switches().size();
    inst.switch_domain.assign(ns, ctrl == Controllability::static_microgrids ? Domain::fixed_off : Domain::free);

    const auto& src = net->sources();
    inst.inverter_domain.assign(src.size(), Domain::fixed_off);
    const auto designated = designated_sources(*net, bg, opt.substation_off);
    for (std::size_t s = 0; s < src.size(); ++s) {
        if (!src[s].forming_capable()) continue;
        if (src[s].kind == SourceKind::substation_source) {
            inst.inverter_domain[s] = opt.substation_off ? Domain::fixed_off : Domain::fixed_on;
            continue;
        }
        switch (ctrl) {
            case Controllability::no_microgrids: break;
            case Controllability::static_microgrids:
            case Controllability::expanding_microgrids:
                if (designated[bg.block_of_source(s)] == s) inst.inverter_domain[s] = Domain::fixed_on;
                break;
            case Controllability::networking_microgrids: inst.inverter_domain[s] = Domain::free; break;
        }
    }
    inst.block_cost.resize(bg.size());
    for (std::size_t b = 0; b < bg.size(); ++b) inst.block_cost[b] = block_coefficient(bg.blocks[b], obj);
    inst.bg = std::move(bg);
    inst.net = std::move(net);
    return inst;
}

std::size_t Configuration::closed_count() const {
    std::size_t n = 0;
    for (char c : switch_closed) n += c != 0;
    return n;
}

std::size_t Configuration::energized_count() const {
    std::size_t n = 0;
    for (char c : block_energized) n += c != 0;
    return n;
}

double absolute_risk(const std::vector<char>& block_energized, const std::vector<char>& switch_closed,
                     const BlockGraph& bg, bool include_switch_risk) {
    double r = 0.0;
    for (std::size_t b = 0; b < bg.size(); ++b)
        if (block_energized[b]) r += bg.blocks[b].risk;
    if (include_switch_risk)
        for (std::size_t i = 0; i < bg.edges.size(); ++i)
            if (switch_closed[i]) r += bg.edges[i].risk;
    return r;
}

double risk_of(const Configuration& c, const BlockGraph& bg, const RiskPolicy& policy) {
    const double total = policy.total > 0 ? policy.total : bg.total_risk(policy.include_switch_risk);
    return absolute_risk(c.block_energized, c.switch_closed, bg, policy.include_switch_risk) / total;
}

double shed_cost(const std::vector<char>& block_energized, const std::vector<double>& block_cost) {
    double s = 0.0;
    for (std::size_t b = 0; b < block_cost.size(); ++b)
        if (!block_energized[b]) s += block_cost[b];
    return s;
}

ObjectiveReport objective_value(const std::vector<char>& block_energized, Objective obj, const BlockGraph& bg) {
    ObjectiveReport r;
    for (std::size_t b = 0; b < bg.size(); ++b) {
        const LoadBlock& blk = bg.blocks[b];
        const double lo = block_coefficient(blk, Objective::load_only);
        const double vo = block_coefficient(blk, Objective::vulnerability_only);
        const double vl = block_coefficient(blk, Objective::vulnerability_weighted);
        r.load_kw.total += lo;
        r.vulnerability.total += vo;
        r.weighted_mw.total += vl;
        if (block_energized[b]) {
            r.load_kw.served += lo;
            r.vulnerability.served += vo;
            r.weighted_mw.served += vl;
        } else {
            r.shed_cost += block_coefficient(blk, obj);
        }
    }
    return r;
}

VulnerabilityStats vulnerability_stats(const std::vector<char>& block_energized, const BlockGraph& bg) {
    double on = 0, off = 0;
    std::size_t non = 0, noff = 0;
    for (std::size_t b = 0; b < bg.size(); ++b) {
        if (block_energized[b]) {
            on += bg.blocks[b].total_svi;
            ++non;
        } else {
            off += bg.blocks[b].total_svi;
            ++noff;
        }
    }
    VulnerabilityStats s;
    if (non) s.served_mean = on / static_cast<double>(non);
    if (noff) s.shed_mean = off / static_cast<double>(noff);
    return s;
}

}  // namespace mgrisk
