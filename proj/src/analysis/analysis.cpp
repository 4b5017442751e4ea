/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <stdexcept>
#include <mutex>
#include <thread>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "mgrisk/hazard.hpp"
#include "mgrisk/network_io.hpp"

namespace mgrisk {

Scenario make_scenario(NetworkModel net, const RiskTable& risk, const SviTable& svi) {
    Scenario sc;
    auto model = std::make_shared<const NetworkModel>(std::move(net));
    sc.bg = identify_blocks(*model);
    const RiskAggregation agg = aggregate_risk(*model, risk);
    sc.bg.apply_hazard(agg.block_risk(*model, sc.bg), aggregate_svi(*model, sc.bg, svi), agg.switch_);
    sc.warnings = risk.warnings;
    sc.warnings.insert(sc.warnings.end(), svi.warnings.begin(), svi.warnings.end());
    sc.net = std::move(model);
    return sc;
}

Scenario load_scenario(const std::filesystem::path& network, const std::filesystem::path& risk,
                       const std::filesystem::path& svi) {
    return make_scenario(parse_network(network), load_risk_csv(risk), load_svi_csv(svi));
}

std::vector<double> sweep_thresholds(double from, double to, double step) {
    if (!(from >= 0.0 && from < to && to <= 1.0))
        throw std::invalid_argument(fmt::format("sweep range [{}, {}] must satisfy 0 <= from < to <= 1", from, to));
    if (!(step > 0.0)) throw std::invalid_argument(fmt::format("sweep step {} must be positive", step));
    std::vector<double> out;
    for (long k = 0;; ++k) {
        const double t = std::round((from + static_cast<double>(k) * step) * 1e12) / 1e12;
        if (t > to + 1e-12) break;
        out.push_back(std::min(t, 1.0));
    }
    return out;
}

std::string config_hash(const std::vector<char>& switch_closed, const std::vector<char>& forming,
                        const std::vector<char>& block_energized) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ull;
    };
    for (const auto* v : {&switch_closed, &forming, &block_energized}) {
        for (char c : *v) mix(c ? '1' : '0');
        mix('|');
    }
    return fmt::format("{:016x}", h);
}

std::string config_hash(const Configuration& c) {
    return config_hash(c.switch_closed, c.forming, c.block_energized);
}

double served_percent(const ObjectiveReport& r, Objective obj) {
    const MetricTotals* m = &r.load_kw;
    if (obj == Objective::vulnerability_only) m = &r.vulnerability;
    if (obj == Objective::vulnerability_weighted) m = &r.weighted_mw;
    return m->total > 0.0 ? 100.0 * m->served / m->total : 100.0;
}

namespace {

// Runs fn(i) for i in [0, n) on a worker pool; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

std::shared_ptr<IslandOracle> oracle_for(const Scenario& sc, const RunSettings& rs) {
    return rs.oracle ? rs.oracle : std::make_shared<IslandOracle>(sc.net);
}

}  // namespace

SweepResult run_sweep(const Scenario& sc, const std::vector<double>& thresholds, const RunSettings& rs) {
    SweepResult res;
    res.rows.resize(thresholds.size());
    SolveOptions so;
    so.oracle = oracle_for(sc, rs);
    parallel_for(thresholds.size(), rs.threads, [&](std::size_t i) {
        const OmcpInstance inst =
            make_instance(sc.net, sc.bg, rs.objective, rs.controllability, thresholds[i], rs.instance);
        const SolveReport r = solve(inst, so);
        SweepRow& row = res.rows[i];
        row.threshold = thresholds[i];
        row.shed_cost = r.shed_cost;
        row.served_pct = served_percent(r.metrics, rs.objective);
        row.risk_pct = 100.0 * r.best.risk_fraction;
        row.config_hash = config_hash(r.best);
        row.block_energized = r.best.block_energized;
    });
    std::set<std::string> seen;
    for (const auto& row : res.rows) seen.insert(row.config_hash);
    res.distinct = seen.size();
    return res;
}

void write_sweep_csv(const SweepResult& r, std::ostream& out) {
    fmt::print(out, "threshold,shed_cost,served_pct,risk_pct,config_hash\n");
    for (const auto& row : r.rows)
        fmt::print(out, "{},{:.6f},{:.4f},{:.4f},{}\n", row.threshold, row.shed_cost, row.served_pct, row.risk_pct,
                   row.config_hash);
}

PriorityTable priority_table(const Scenario& sc, const std::vector<double>& thresholds, const RunSettings& rs) {
    PriorityTable t;
    t.steps = thresholds.size();
    const std::size_t sub = sc.bg.substation_block();
    for (std::size_t b = 0; b < sc.bg.size(); ++b)
        if (b != sub) t.entries.push_back(PriorityEntry{sc.bg.blocks[b].id, {}, {}, {}});

    RunSettings each = rs;
    each.oracle = oracle_for(sc, rs);
    for (Objective obj : {Objective::load_only, Objective::vulnerability_only, Objective::vulnerability_weighted}) {
        each.objective = obj;
        const SweepResult s = run_sweep(sc, thresholds, each);
        std::vector<std::pair<std::size_t, std::size_t>> order;  // (steps on, entry)
        for (std::size_t e = 0; e < t.entries.size(); ++e) {
            const std::size_t b = static_cast<std::size_t>(t.entries[e].block_id - 1);
            std::size_t on = 0;
            for (const auto& row : s.rows) on += row.block_energized[b] != 0;
            t.entries[e].steps_on[obj] = on;
            order.emplace_back(on, e);
        }
        // Most steps energized first; entries are already in ascending id order.
        std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t k = 0; k < order.size(); ++k) t.entries[order[k].second].rank[obj] = static_cast<int>(k + 1);
    }
    for (auto& e : t.entries)
        for (Objective obj : {Objective::load_only, Objective::vulnerability_only, Objective::vulnerability_weighted})
            e.delta[obj] = e.rank[Objective::load_only] - e.rank[obj];
    return t;
}

void write_priority_csv(const PriorityTable& t, std::ostream& out) {
    using O = Objective;
    fmt::print(out, "block,steps_lo,steps_vo,steps_vl,rank_lo,rank_vo,rank_vl,delta_vo,delta_vl\n");
    for (const auto& e : t.entries)
        fmt::print(out, "{},{},{},{},{},{},{},{:+d},{:+d}\n", e.block_id, e.steps_on.at(O::load_only),
                   e.steps_on.at(O::vulnerability_only), e.steps_on.at(O::vulnerability_weighted),
                   e.rank.at(O::load_only), e.rank.at(O::vulnerability_only), e.rank.at(O::vulnerability_weighted),
                   e.delta.at(O::vulnerability_only), e.delta.at(O::vulnerability_weighted));
}

std::vector<CompareRow> compare_regimes(const Scenario& sc, const std::vector<Controllability>& regimes,
                                        double threshold, const RunSettings& rs) {
    std::vector<CompareRow> rows(regimes.size());
    SolveOptions so;
    so.oracle = oracle_for(sc, rs);
    parallel_for(regimes.size(), rs.threads, [&](std::size_t i) {
        const OmcpInstance inst = make_instance(sc.net, sc.bg, rs.objective, regimes[i], threshold, rs.instance);
        const SolveReport r = solve(inst, so);
        CompareRow& row = rows[i];
        row.regime = regimes[i];
        row.blocks_on = r.best.energized_count();
        row.blocks_total = sc.bg.size();
        row.switches_closed = r.best.closed_count();
        row.risk_pct = 100.0 * r.best.risk_fraction;
        row.served_pct = served_percent(r.metrics, rs.objective);
        row.shed_cost = r.shed_cost;
        row.vulnerability = r.vulnerability;
    });
    return rows;
}

void write_compare_csv(const std::vector<CompareRow>& rows, std::ostream& out) {
    auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : std::string(); };
    fmt::print(out, "regime,blocks_on,blocks_total,switches_closed,risk_pct,served_pct,shed_cost,mean_v_served,mean_v_shed\n");
    for (const auto& r : rows)
        fmt::print(out, "{},{},{},{},{:.4f},{:.4f},{:.6f},{},{}\n", short_name(r.regime), r.blocks_on, r.blocks_total,
                   r.switches_closed, r.risk_pct, r.served_pct, r.shed_cost, opt(r.vulnerability.served_mean),
                   opt(r.vulnerability.shed_mean));
}

void write_blocks_csv(const BlockGraph& bg, std::ostream& out) {
    fmt::print(out, "id,buses,kw,v,rho\n");
    for (const auto& b : bg.blocks) {
        std::string buses;
        for (const auto& id : b.bus_ids) {
            if (!buses.empty()) buses += ' ';
            buses += id;
        }
        fmt::print(out, "{},{},{},{},{}\n", b.id, buses, b.total_pd, b.total_svi, b.risk);
    }
}

}  // namespace mgrisk
