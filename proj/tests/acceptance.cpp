/*
 * SPDX-License-Identifier: Apache-2.0
 */
// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "mgrisk/analysis.hpp"
#include "mgrisk/milp.hpp"
#include "mgrisk/network_io.hpp"
#include "mgrisk/random_instance.hpp"
#include "mgrisk/reduce.hpp"
#include "mgrisk/solver.hpp"
#include "mps_reader.hpp"

using namespace mgrisk;
namespace fs = std::filesystem;

namespace {

fs::path data(const std::string& name) { return fs::path(MGRISK_DATA_DIR) / name; }

// Collects failed sub-checks with a short reason.
struct Checks {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

struct Criterion {
    int id;
    std::string title;
    double limit_s;
    std::function<void(Checks&)> body;
};

const Objective kObjectives[] = {Objective::load_only, Objective::vulnerability_only,
                                 Objective::vulnerability_weighted};

Scenario random_scenario(std::uint64_t seed) {
    RandomInstanceOptions o;
    o.seed = seed;
    RandomInstance r = random_instance(o);
    return make_scenario(NetworkModel::from_data(r.network), r.risk, r.svi);
}

OmcpInstance instance(const Scenario& sc, Objective obj, Controllability c, double t, InstanceOptions opt = {}) {
    return make_instance(sc.net, sc.bg, obj, c, t, opt);
}

// 1: block columns as stored in the fixture; the weighted value is exact arithmetic.
void block_table(Checks& ck) {
    const Scenario sc = load_scenario(data("ieee13.json"), data("ieee13_risk.csv"), data("ieee13_svi.csv"));
    const std::vector<double> rho{91, 108, 46, 101, 65, 108}, kw{2453, 185, 0, 1013, 25, 200}, v{2, 9, 2, 4, 6, 3},
        weighted{4.906, 1.665, 0, 4.052, 0.15, 0.6};
    ck.expect(sc.bg.size() == 6, "block count");
    for (std::size_t b = 0; b < std::min<std::size_t>(6, sc.bg.size()); ++b) {
        const LoadBlock& blk = sc.bg.blocks[b];
        const std::string tag = fmt::format("block {}", blk.id);
        ck.expect(blk.risk == rho[b], tag + " risk");
        ck.expect(blk.total_pd == kw[b], tag + " kW");
        ck.expect(blk.total_svi == v[b], tag + " v");
        ck.expect(block_coefficient(blk, Objective::vulnerability_weighted) == weighted[b], tag + " weighted");
    }
}

// 2: illustrative example.
void illustrative(Checks& ck) {
    const Scenario sc = load_scenario(data("ieee13.json"), data("ieee13_risk.csv"), data("ieee13_svi.csv"));
    const SolveReport r = solve(instance(sc, Objective::vulnerability_weighted,
                                         Controllability::networking_microgrids, 0.5));
    ck.expect(r.optimal, "optimal");
    ck.expect(r.best.block_energized == std::vector<char>{1, 1, 0, 1, 0, 1}, "blocks {1,2,4,6}");
    ck.expect(r.best.closed_count() == 1, "one closed switch");
    const double w_served = r.metrics.weighted_mw.served * 1000.0, w_total = r.metrics.weighted_mw.total * 1000.0;
    ck.expect(std::abs(w_served - 11223) <= 1e-9 && std::abs(w_total - 11373) <= 1e-9, "weighted 11223/11373");
    ck.expect(r.metrics.load_kw.served == 3851 && r.metrics.load_kw.total == 3876, "kW 3851/3876");
    ck.expect(r.metrics.vulnerability.served == 18 && r.metrics.vulnerability.total == 26, "v 18/26");
    ck.expect(r.best.risk_fraction >= 0.47 && r.best.risk_fraction <= 0.50,
              fmt::format("risk fraction {:.4f}", r.best.risk_fraction));
}

// 3: shutoff priority ranks from a 1001-step sweep.
void priority(Checks& ck) {
    const Scenario sc = load_scenario(data("ieee13.json"), data("ieee13_risk.csv"), data("ieee13_svi.csv"));
    RunSettings rs;
    rs.oracle = std::make_shared<IslandOracle>(sc.net);
    const PriorityTable t = priority_table(sc, sweep_thresholds(0, 1, 0.001), rs);
    std::map<int, std::map<Objective, int>> rank;
    for (const auto& e : t.entries) rank[e.block_id] = e.rank;
    // Ranks for blocks 2..6 under LoadOnly, VulnerabilityOnly, Weighted.
    const std::map<int, std::array<int, 3>> expected{
        {2, {4, 1, 2}}, {3, {5, 4, 5}}, {4, {1, 3, 1}}, {5, {3, 2, 3}}, {6, {2, 5, 4}}};
    for (const auto& [id, r] : expected)
        for (int k = 0; k < 3; ++k)
            ck.expect(rank[id][kObjectives[k]] == r[static_cast<std::size_t>(k)],
                      fmt::format("block {} {} rank {}", id, short_name(kObjectives[k]), rank[id][kObjectives[k]]));
    ck.expect(rank[2][Objective::vulnerability_only] == 1, "block 2 first under vo");
    ck.expect(rank[2][Objective::vulnerability_weighted] < rank[2][Objective::load_only], "block 2 promoted under vl");
    ck.expect(rank[4][Objective::load_only] == 1 && rank[4][Objective::vulnerability_weighted] == 1,
              "block 4 first under lo and vl");
}

// 4: branch and bound against exhaustive enumeration.
void oracle_equivalence(Checks& ck) {
    const Controllability regimes[] = {Controllability::no_microgrids, Controllability::static_microgrids,
                                       Controllability::expanding_microgrids,
                                       Controllability::networking_microgrids};
    std::vector<std::uint64_t> bad;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Scenario sc = random_scenario(seed);
        const double t = static_cast<double>((seed * 37) % 101) / 100.0;
        const OmcpInstance inst = instance(sc, kObjectives[seed % 3], regimes[(seed / 3) % 4], t);
        const Enumeration en = enumerate_all(inst);
        if (solve(inst).shed_cost != en.configurations[en.best].shed_cost) bad.push_back(seed);
    }
    std::cout << "    seeds 1-100 (random_instance, default options)\n";
    for (auto s : bad) ck.expect(false, fmt::format("seed {}", s));
}

struct NamedScenario {
    std::string name;
    Scenario sc;
    InstanceOptions opt;
};

std::vector<NamedScenario> nesting_cases() {
    std::vector<NamedScenario> out;
    const auto rr = data("ieee13_risk.csv"), sv = data("ieee13_svi.csv");
    out.push_back({"ieee13", load_scenario(data("ieee13.json"), rr, sv), {}});
    out.push_back({"ieee13_widespread", load_scenario(data("ieee13_widespread.json"), rr, sv), {}});
    out.push_back({"ieee13_widespread/substation-off", load_scenario(data("ieee13_widespread.json"), rr, sv),
                   InstanceOptions{true, true}});
    const RiskTable r15 = load_risk_csv(data("reduction15_risk.csv"));
    const SviTable s15 = load_svi_csv(data("reduction15_svi.csv"));
    const NetworkModel full = parse_network(data("reduction15.json"));
    out.push_back({"reduction15", make_scenario(full, r15, s15), {}});
    const ReductionResult red = reduce_feeder(full);
    out.push_back({"reduction15/reduced",
                   make_scenario(red.network, remap_risk(r15, red.absorbed_into_bus), remap_svi(s15, red.load_aggregate)),
                   {}});
    for (std::uint64_t seed = 2001; seed <= 2050; ++seed)
        out.push_back({fmt::format("seed {}", seed), random_scenario(seed), {}});
    return out;
}

// 5: served value monotone in the budget; regime nesting.
void nesting(Checks& ck) {
    const auto cases = nesting_cases();
    const auto grid = sweep_thresholds(0, 1, 0.01);
    for (const auto& c : cases) {
        auto oracle = std::make_shared<IslandOracle>(c.sc.net);
        for (Objective obj : kObjectives) {
            double prev = kInf;
            for (double t : grid) {
                const OmcpInstance inst =
                    instance(c.sc, obj, Controllability::networking_microgrids, t, c.opt);
                SolveOptions so;
                so.oracle = oracle;
                const double cost = solve(inst, so).shed_cost;
                ck.expect(cost <= prev + cost_tolerance(inst),
                          fmt::format("{} {} served falls at {}", c.name, short_name(obj), t));
                prev = cost;
            }
            for (int k = 0; k <= 10; ++k) {
                const double t = k / 10.0;
                std::map<Controllability, double> cost;
                double tol = 0;
                for (auto reg : {Controllability::no_microgrids, Controllability::static_microgrids,
                                 Controllability::expanding_microgrids, Controllability::networking_microgrids}) {
                    const OmcpInstance inst = instance(c.sc, obj, reg, t, c.opt);
                    SolveOptions so;
                    so.oracle = oracle;
                    cost[reg] = solve(inst, so).shed_cost;
                    tol = cost_tolerance(inst);
                }
                const std::string at = fmt::format("{} {} at {}", c.name, short_name(obj), t);
                ck.expect(cost[Controllability::static_microgrids] >= cost[Controllability::expanding_microgrids] - tol,
                          at + " static < expanding");
                ck.expect(cost[Controllability::expanding_microgrids] >=
                              cost[Controllability::networking_microgrids] - tol,
                          at + " expanding < networking");
                ck.expect(cost[Controllability::no_microgrids] >= cost[Controllability::networking_microgrids] - tol,
                          at + " none < networking");
            }
        }
    }
    std::cout << fmt::format("    {} scenarios (5 fixture cases, random seeds 2001-2050)\n", cases.size());
}

// Residuals of the linearized equations, evaluated from raw line data.
struct Residual {
    double balance = 0.0;
    double drop = 0.0;
};

Residual residuals(const NetworkModel& n, const DispatchSolution& d) {
    const double base = n.base_kva(), zb = n.z_base(), s3 = std::sqrt(3.0);
    Residual res;
    const auto& edges = n.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Edge& ed = edges[e];
        if (!d.bus_energized[ed.from] || !d.bus_energized[ed.to]) continue;
        const auto ph = ed.phases.phases();
        for (std::size_t i = 0; i < ph.size(); ++i) {
            double rhs = d.w[ed.from][ph[i]];
            if (ed.kind == EdgeKind::line) {
                const LineSegment& l = n.lines()[ed.element];
                for (std::size_t j = 0; j < ph.size(); ++j) {
                    const double r = l.r(static_cast<int>(i), static_cast<int>(j)) / zb;
                    const double x = l.x(static_cast<int>(i), static_cast<int>(j)) / zb;
                    double mp, mq;
                    if (i == j) {
                        mp = -2 * r;
                        mq = -2 * x;
                    } else {
                        // (a,b), (b,c), (c,a) take r - sqrt3 x and x + sqrt3 r.
                        const int a = index_of(ph[i]), b = index_of(ph[j]);
                        const bool cyc = (b - a + 3) % 3 == 1;
                        mp = cyc ? r - s3 * x : r + s3 * x;
                        mq = cyc ? x + s3 * r : x - s3 * r;
                    }
                    rhs += mp * d.p[e][ph[j]] / base + mq * d.q[e][ph[j]] / base;
                }
            }
            res.drop = std::max(res.drop, std::abs(d.w[ed.to][ph[i]] - rhs));
        }
    }
    for (std::size_t b = 0; b < n.buses().size(); ++b) {
        if (!d.bus_energized[b]) continue;
        for (Phase p : n.buses()[b].phases.phases()) {
            double bp = 0, bq = 0;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (!edges[e].phases.contains(p)) continue;
                if (edges[e].to == b) bp += d.p[e][p], bq += d.q[e][p];
                if (edges[e].from == b) bp -= d.p[e][p], bq -= d.q[e][p];
            }
            for (std::size_t s = 0; s < n.sources().size(); ++s)
                if (n.sources()[s].bus == n.buses()[b].id && d.pg[s].phases.contains(p))
                    bp += d.pg[s][p], bq += d.qg[s][p];
            for (const auto& l : n.loads())
                if (l.bus == n.buses()[b].id) bp -= l.pd[p], bq -= l.qd[p];
            res.balance = std::max({res.balance, std::abs(bp) / base, std::abs(bq) / base});
        }
    }
    return res;
}

DispatchSolution substation_dispatch(const NetworkModel& n, const BlockGraph& bg) {
    std::vector<char> forming(n.sources().size(), 0);
    forming[*n.substation_source()] = 1;
    const IslandSet s = islands_for(bg, std::vector<char>(n.switches().size(), 0), forming);
    std::vector<char> on;
    for (const auto& isl : s.islands) on.push_back(isl.energized());
    return solve_dispatch(n, bg, s.islands, on);
}

// 6: power-flow numerics.
void power_flow(Checks& ck) {
    int feasible = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const int buses = 2 + static_cast<int>(seed % 9);
        const NetworkModel n = NetworkModel::from_data(random_radial_island(seed, buses));
        const BlockGraph bg = identify_blocks(n);
        const DispatchSolution d = substation_dispatch(n, bg);
        if (!d.feasible) continue;
        ++feasible;
        const Residual r = residuals(n, d);
        ck.expect(r.drop <= 1e-7 && r.balance <= 1e-7,
                  fmt::format("seed {}: drop {:.2e} balance {:.2e}", seed, r.drop, r.balance));
        for (std::size_t e = 0; e < n.edges().size(); ++e) {
            const Edge& ed = n.edges()[e];
            bool idle = true;
            for (Phase p : ed.phases.phases()) idle = idle && d.p[e][p] == 0.0 && d.q[e][p] == 0.0;
            if (!idle) continue;
            for (Phase p : ed.phases.phases())
                ck.expect(d.w[ed.from][p] == d.w[ed.to][p], fmt::format("seed {}: idle edge {} drops", seed, e));
        }

        // Same island with nothing to serve: no flow anywhere, flat voltage.
        NetworkData z = n.data();
        for (auto& l : z.loads) l.pd = PhaseValues{l.pd.phases, {0, 0, 0}}, l.qd = PhaseValues{l.qd.phases, {0, 0, 0}};
        for (auto& s : z.sources)
            if (s.kind != SourceKind::substation_source)
                s.pmax = PhaseValues{s.pmax.phases, {0, 0, 0}}, s.qmin = PhaseValues{s.qmin.phases, {0, 0, 0}},
                s.qmax = PhaseValues{s.qmax.phases, {0, 0, 0}};
        const NetworkModel nz = NetworkModel::from_data(z);
        const DispatchSolution dz = substation_dispatch(nz, identify_blocks(nz));
        ck.expect(dz.feasible, fmt::format("seed {}: zero demand infeasible", seed));
        if (!dz.feasible) continue;
        for (std::size_t e = 0; e < nz.edges().size(); ++e)
            for (Phase p : nz.edges()[e].phases.phases())
                ck.expect(dz.p[e][p] == 0.0 && dz.q[e][p] == 0.0, fmt::format("seed {}: zero demand flow", seed));
        for (std::size_t b = 0; b < nz.buses().size(); ++b)
            for (Phase p : nz.buses()[b].phases.phases())
                ck.expect(dz.w[b][p] == 1.0, fmt::format("seed {}: zero demand voltage", seed));
    }
    ck.expect(feasible >= 150, fmt::format("only {} feasible islands", feasible));

    // Single phase, 1000 kW through r = 0.01 ohm on a 1 ohm base: W = 1 - 2 * 0.01 * 1.
    const NetworkModel two = parse_network(data("two_bus.json"));
    const DispatchSolution d2 = substation_dispatch(two, identify_blocks(two));
    ck.expect(d2.feasible && std::abs(d2.w[*two.bus_index("ld")][Phase::a] - (1.0 - 2 * 0.01 * 1.0)) <= 1e-12,
              "two-bus drop");
    std::cout << fmt::format("    {} feasible random islands (seeds 1-200)\n", feasible);
}

// 7: reduction conservation.
void reduction(Checks& ck) {
    const NetworkModel before = parse_network(data("reduction15.json"));
    const ReductionResult r = reduce_feeder(before);
    auto totals = [](const NetworkModel& n) {
        std::array<double, 4> t{0, 0, 0, 0};
        for (const auto& l : n.loads()) {
            for (Phase p : kAllPhases) t[0] += l.pd[p], t[1] += l.qd[p];
            t[2] += l.svi;
        }
        for (const auto& s : n.sources()) t[3] += s.kind == SourceKind::storage;
        return t;
    };
    const auto a = totals(before), b = totals(r.network);
    ck.expect(a[0] == b[0], "kW");
    ck.expect(a[1] == b[1], "kvar");
    ck.expect(a[2] == b[2], "SVI");
    ck.expect(a[3] == b[3], "storage count");
    ck.expect(r.network.buses().size() < before.buses().size(), "bus count");
    std::cout << fmt::format("    buses {} -> {}\n", before.buses().size(), r.network.buses().size());
}

// 8: MPS export round trip.
void mps_round_trip(Checks& ck) {
    const Scenario sc = load_scenario(data("ieee13.json"), data("ieee13_risk.csv"), data("ieee13_svi.csv"));
    const OmcpInstance inst =
        instance(sc, Objective::vulnerability_weighted, Controllability::networking_microgrids, 0.5);
    const MilpModel m = build_milp(inst);
    std::stringstream ss;
    write_mps(m, ss);
    const mps::Model p = mps::read(ss);
    ck.expect(p.saw_endata, "ENDATA");
    ck.expect(p.columns.size() == m.columns.size(), "column count");
    ck.expect(p.row_type.size() == m.rows.size(), "row count");
    ck.expect(p.integer_columns.size() == m.integer_count(), "integer count");
    ck.expect(p.rhs.count("risk") && p.rhs.at("risk") == inst.policy.threshold * inst.policy.total, "risk RHS");
    std::cout << fmt::format("    {} columns ({} integer), {} rows\n", m.columns.size(), m.integer_count(),
                             m.rows.size());
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "fixture block data and weighted values", 1.0, block_table},
        {2, "illustrative example (networking, weighted, 0.5)", 10.0, illustrative},
        {3, "shutoff priority ranks", 180.0, priority},
        {4, "branch and bound equals enumeration on 100 random instances", 300.0, oracle_equivalence},
        {5, "monotone sweeps and regime nesting", kInf, nesting},
        {6, "power-flow residuals and analytic two-bus case", kInf, power_flow},
        {7, "feeder reduction conservation", kInf, reduction},
        {8, "MILP export round trip", kInf, mps_round_trip},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Checks ck;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(ck);
        } catch (const std::exception& e) {
            ck.expect(false, fmt::format("exception: {}", e.what()));
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) ck.expect(false, fmt::format("took {:.2f} s, limit {:.0f} s", secs, c.limit_s));
        const bool ok = ck.failures.empty();
        failed += !ok;
        std::cout << fmt::format("{} criterion {}: {} ({:.2f} s)\n", ok ? "PASS" : "FAIL", c.id, c.title, secs);
        for (std::size_t i = 0; i < std::min<std::size_t>(ck.failures.size(), 20); ++i)
            std::cout << "    " << ck.failures[i] << "\n";
        if (ck.failures.size() > 20) std::cout << fmt::format("    ... {} more\n", ck.failures.size() - 20);
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
                             criteria.size());
    return failed == 0 ? 0 : 1;
}
