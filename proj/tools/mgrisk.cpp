/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "mgrisk/analysis.hpp"
#include "mgrisk/milp.hpp"
#include "mgrisk/network_io.hpp"
#include "mgrisk/random_instance.hpp"
#include "mgrisk/reduce.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mgrisk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonArgs {
    std::string network, risk, svi;
    std::string objective = "vl";
    std::string controllability = "networking";
    bool no_switch_risk = false;
    bool substation_off = false;
    std::size_t threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_regime) {
    cmd->add_option("--network", a.network, "Network JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--risk", a.risk, "Risk CSV (id,value)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--svi", a.svi, "SVI CSV (id,value)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--objective", a.objective, "lo | vo | vl")->check(CLI::IsMember({"lo", "vo", "vl"}));
    if (with_regime)
        cmd->add_option("--controllability", a.controllability, "none | static | expanding | networking")
            ->check(CLI::IsMember({"none", "static", "expanding", "networking"}));
    cmd->add_flag("--no-switch-risk", a.no_switch_risk, "Leave closed-switch risk out of the budget");
    cmd->add_flag("--substation-off", a.substation_off, "Keep the substation source disconnected");
    cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
}

RunSettings settings(const CommonArgs& a) {
    RunSettings rs;
    rs.objective = *objective_from_string(a.objective);
    rs.controllability = *controllability_from_string(a.controllability);
    rs.instance.include_switch_risk = !a.no_switch_risk;
    rs.instance.substation_off = a.substation_off;
    rs.threads = a.threads;
    return rs;
}

Scenario scenario(const CommonArgs& a) {
    Scenario sc = load_scenario(a.network, a.risk, a.svi);
    for (const auto& w : sc.warnings) fmt::print(std::cerr, "warning: {}\n", w);
    return sc;
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw InputError(fmt::format("cannot write '{}'", p.string()));
    return out;
}

// Writes through `fn` to `path`, or to stdout when the path is empty.
template <class Fn>
void emit(const std::string& path, Fn fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    auto out = open_out(path);
    fn(out);
}

json metric(const MetricTotals& m) {
    return json{{"served", m.served}, {"total", m.total}, {"percent", m.percent()}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json solution_json(const OmcpInstance& inst, const SolveReport& r) {
    const NetworkModel& net = *inst.net;
    const Configuration& c = r.best;
    json j;
    j["objective"] = std::string(to_string(inst.objective));
    j["controllability"] = std::string(to_string(inst.controllability));
    j["threshold"] = inst.policy.threshold;
    j["include_switch_risk"] = inst.policy.include_switch_risk;
    j["substation_off"] = inst.substation_off;

    json cfg;
    json sw = json::object();
    for (std::size_t i = 0; i < net.switches().size(); ++i) sw[net.switches()[i].id] = c.switch_closed[i] != 0;
    cfg["switches_closed"] = std::move(sw);
    json inv = json::object();
    for (std::size_t s = 0; s < net.sources().size(); ++s)
        if (net.sources()[s].forming_capable()) inv[net.sources()[s].id] = c.forming[s] != 0;
    cfg["grid_forming"] = std::move(inv);
    json blocks = json::array();
    for (std::size_t b = 0; b < inst.bg.size(); ++b) {
        const LoadBlock& blk = inst.bg.blocks[b];
        blocks.push_back({{"id", blk.id},
                          {"energized", c.block_energized[b] != 0},
                          {"buses", blk.bus_ids},
                          {"kw", blk.total_pd},
                          {"v", blk.total_svi},
                          {"risk", blk.risk}});
    }
    cfg["blocks"] = std::move(blocks);
    json islands = json::array();
    for (const Island& isl : c.islands) {
        if (!isl.forming_source || !c.block_energized[isl.blocks.front()]) continue;
        json ib = json::array();
        for (std::size_t b : isl.blocks) ib.push_back(inst.bg.blocks[b].id);
        islands.push_back({{"forming_source", net.sources()[*isl.forming_source].id}, {"blocks", std::move(ib)}});
    }
    cfg["islands"] = std::move(islands);

    json dispatch;
    json gens = json::object();
    const auto& d = c.dispatch;
    for (std::size_t s = 0; s < net.sources().size() && !d.pg.empty(); ++s) {
        const auto& src = net.sources()[s];
        if (!c.block_energized[inst.bg.block_of_source(s)]) continue;
        json g;
        for (Phase ph : src.pmax.phases.phases())
            g[std::string(1, to_char(ph))] = {{"p_kw", d.pg[s][ph]}, {"q_kvar", d.qg[s][ph]}};
        gens[src.id] = std::move(g);
    }
    dispatch["sources"] = std::move(gens);
    json volts = json::object();
    for (std::size_t i = 0; i < net.buses().size() && !d.bus_energized.empty(); ++i) {
        if (!d.bus_energized[i]) continue;
        json v;
        for (Phase ph : net.buses()[i].phases.phases()) v[std::string(1, to_char(ph))] = std::sqrt(d.w[i][ph]);
        volts[net.buses()[i].id] = std::move(v);
    }
    dispatch["voltage_pu"] = std::move(volts);
    cfg["dispatch"] = std::move(dispatch);
    j["configuration"] = std::move(cfg);

    json rep;
    rep["optimal"] = r.optimal;
    rep["shed_cost"] = r.shed_cost;
    rep["risk"] = c.risk;
    rep["risk_fraction"] = c.risk_fraction;
    rep["risk_total"] = inst.policy.total;
    rep["served"] = {{"load_kw", metric(r.metrics.load_kw)},
                     {"vulnerability", metric(r.metrics.vulnerability)},
                     {"weighted_mw", metric(r.metrics.weighted_mw)}};
    rep["mean_v_served"] = optional_number(r.vulnerability.served_mean);
    rep["mean_v_shed"] = optional_number(r.vulnerability.shed_mean);
    rep["nodes"] = r.nodes;
    rep["leaves"] = r.leaves;
    rep["topologies_evaluated"] = r.topologies_evaluated;
    rep["lp_solves"] = r.lp_solves;
    rep["wall_seconds"] = r.wall_seconds;
    rep["diagnostics"] = r.diagnostics;
    j["report"] = std::move(rep);
    return j;
}

void write_summary(const OmcpInstance& inst, const SolveReport& r, std::ostream& out) {
    fmt::print(out,
               "objective,controllability,threshold,blocks_on,blocks_total,switches_closed,risk_pct,"
               "load_served_pct,vulnerability_served_pct,weighted_served_pct,shed_cost,topologies_evaluated,optimal\n");
    fmt::print(out, "{},{},{},{},{},{},{:.2f},{:.2f},{:.2f},{:.2f},{:.6f},{},{}\n", short_name(inst.objective),
               short_name(inst.controllability), inst.policy.threshold, r.best.energized_count(), inst.bg.size(),
               r.best.closed_count(), 100.0 * r.best.risk_fraction, r.metrics.load_kw.percent(),
               r.metrics.vulnerability.percent(), r.metrics.weighted_mw.percent(), r.shed_cost,
               r.topologies_evaluated, r.optimal ? "true" : "false");
}

int run_solve(const CommonArgs& a, double threshold, const std::string& mps, const std::string& out_dir,
              std::size_t max_binaries) {
    const Scenario sc = scenario(a);
    const RunSettings rs = settings(a);
    const OmcpInstance inst = make_instance(sc.net, sc.bg, rs.objective, rs.controllability, threshold, rs.instance);
    if (!mps.empty()) {
        if (fs::path(mps).has_parent_path()) fs::create_directories(fs::path(mps).parent_path());
        export_milp(inst, mps);
        fmt::print("wrote {}\n", mps);
    }
    SolveOptions so;
    so.max_binaries = max_binaries;
    SolveReport r;
    try {
        r = solve(inst, so);
    } catch (const CeilingExceeded& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        if (mps.empty()) fmt::print(std::cerr, "hint: pass --export-mps <file> and solve the MILP externally\n");
        return kExitInfeasible;
    }
    const fs::path dir = out_dir;
    {
        auto out = open_out(dir / "solution.json");
        out << solution_json(inst, r).dump(2) << '\n';
    }
    {
        auto out = open_out(dir / "summary.csv");
        write_summary(inst, r, out);
    }
    for (const auto& d : r.diagnostics) fmt::print(std::cerr, "diagnostic: {}\n", d);
    fmt::print("{} / {} at threshold {}: {} of {} blocks energized, {} switches closed\n", to_string(inst.objective),
               to_string(inst.controllability), threshold, r.best.energized_count(), inst.bg.size(),
               r.best.closed_count());
    fmt::print("risk {:.2f}%  served: load {:.2f}%  vulnerability {:.2f}%  weighted {:.2f}%\n",
               100.0 * r.best.risk_fraction, r.metrics.load_kw.percent(), r.metrics.vulnerability.percent(),
               r.metrics.weighted_mw.percent());
    fmt::print("topologies evaluated: {}  nodes: {}  LP solves: {}  time: {:.3f} s\n", r.topologies_evaluated, r.nodes,
               r.lp_solves, r.wall_seconds);
    return r.optimal ? kExitOk : kExitInfeasible;
}

std::vector<Controllability> parse_regimes(const std::vector<std::string>& names) {
    std::vector<Controllability> out;
    for (const auto& n : names) {
        auto c = controllability_from_string(n);
        if (!c) throw InputError(fmt::format("unknown regime '{}'", n));
        out.push_back(*c);
    }
    return out;
}

void write_id_values(const std::map<std::string, double>& values, const fs::path& path) {
    auto out = open_out(path);
    fmt::print(out, "id,value\n");
    for (const auto& [id, v] : values) fmt::print(out, "{},{}\n", id, v);
}

int run_reduce(const std::string& in, const std::string& out, const std::string& risk, const std::string& svi,
               const std::string& risk_out, const std::string& svi_out) {
    const NetworkModel net = parse_network(in);
    const ReductionResult red = reduce_feeder(net);
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    write_network(red.network, out);
    for (const auto& r : red.retained) fmt::print(std::cerr, "retained: {}\n", r);
    fmt::print("buses {} -> {}, loads {} -> {}\n", net.buses().size(), red.network.buses().size(), net.loads().size(),
               red.network.loads().size());
    if (!risk.empty()) {
        write_id_values(remap_risk(load_risk_csv(risk), red.absorbed_into_bus).values, risk_out.empty() ? fs::path(out).replace_extension(".risk.csv") : fs::path(risk_out));
    }
    if (!svi.empty()) {
        write_id_values(remap_svi(load_svi_csv(svi), red.load_aggregate).values, svi_out.empty() ? fs::path(out).replace_extension(".svi.csv") : fs::path(svi_out));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wildfire-aware networked microgrid configuration"};
    app.require_subcommand(1);

    CommonArgs common;
    double threshold = 0.5;
    std::string mps, out_dir = ".", csv;
    std::size_t max_binaries = SolveOptions{}.max_binaries;
    double from = 0.0, to = 1.0, step = 0.001;

    auto* solve_cmd = app.add_subcommand("solve", "Solve one configuration problem");
    add_common(solve_cmd, common, true);
    solve_cmd->add_option("--threshold", threshold, "Accepted risk fraction in [0, 1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    solve_cmd->add_option("--export-mps", mps, "Also write the full MILP in MPS format");
    solve_cmd->add_option("--out", out_dir, "Directory for solution.json and summary.csv");
    solve_cmd->add_option("--max-binaries", max_binaries, "Ceiling on free binaries for the exact solver");

    auto add_range = [&](CLI::App* cmd) {
        cmd->add_option("--from", from, "First threshold")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--to", to, "Last threshold")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--step", step, "Threshold step")->check(CLI::PositiveNumber);
        cmd->add_option("--out", csv, "CSV output file (default stdout)");
    };
    auto* sweep_cmd = app.add_subcommand("sweep", "Solve over a range of risk thresholds");
    add_common(sweep_cmd, common, true);
    add_range(sweep_cmd);

    auto* prio_cmd = app.add_subcommand("priority", "Block shutoff priority under each objective");
    add_common(prio_cmd, common, true);
    add_range(prio_cmd);

    std::vector<std::string> regimes{"static", "expanding", "networking"};
    auto* cmp_cmd = app.add_subcommand("compare", "Compare controllability regimes");
    add_common(cmp_cmd, common, false);
    cmp_cmd->add_option("--threshold", threshold, "Accepted risk fraction in [0, 1]")->check(CLI::Range(0.0, 1.0));
    cmp_cmd->add_option("--regimes", regimes, "Comma-separated regimes")->delimiter(',');
    cmp_cmd->add_option("--out", csv, "CSV output file (default stdout)");

    auto* blocks_cmd = app.add_subcommand("blocks", "Print the load block table");
    add_common(blocks_cmd, common, false);

    std::uint64_t seed = 1;
    RandomInstanceOptions gen;
    auto* gen_cmd = app.add_subcommand("generate", "Write a random feeder with hazard tables");
    gen_cmd->add_option("--seed", seed, "Random seed");
    gen_cmd->add_option("--max-blocks", gen.max_blocks, "Upper bound on load blocks")->check(CLI::Range(1, 64));
    gen_cmd->add_option("--max-switches", gen.max_switches, "Upper bound on switches")->check(CLI::Range(0, 64));
    gen_cmd->add_flag("--unbounded-generation", gen.unbounded_generation, "Give forming sources unlimited capacity");
    gen_cmd->add_option("--out", out_dir, "Output directory");

    std::string red_in, red_out, red_risk, red_svi, red_risk_out, red_svi_out;
    auto* red_cmd = app.add_subcommand("reduce", "Collapse distribution-transformer secondaries");
    red_cmd->add_option("--network", red_in, "Network JSON")->required()->check(CLI::ExistingFile);
    red_cmd->add_option("--out", red_out, "Reduced network JSON")->required();
    red_cmd->add_option("--risk", red_risk, "Risk CSV to remap")->check(CLI::ExistingFile);
    red_cmd->add_option("--svi", red_svi, "SVI CSV to remap")->check(CLI::ExistingFile);
    red_cmd->add_option("--risk-out", red_risk_out, "Remapped risk CSV (default <out>.risk.csv)");
    red_cmd->add_option("--svi-out", red_svi_out, "Remapped SVI CSV (default <out>.svi.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*solve_cmd) return run_solve(common, threshold, mps, out_dir, max_binaries);

        if (*sweep_cmd || *prio_cmd) {
            const auto ts = sweep_thresholds(from, to, step);
            const Scenario sc = scenario(common);
            const RunSettings rs = settings(common);
            if (*sweep_cmd) {
                const SweepResult r = run_sweep(sc, ts, rs);
                emit(csv, [&](std::ostream& o) { write_sweep_csv(r, o); });
                fmt::print(csv.empty() ? std::cerr : std::cout, "{} thresholds, {} distinct solutions\n", ts.size(),
                           r.distinct);
            } else {
                const PriorityTable t = priority_table(sc, ts, rs);
                emit(csv, [&](std::ostream& o) { write_priority_csv(t, o); });
            }
            return kExitOk;
        }
        if (*cmp_cmd) {
            const Scenario sc = scenario(common);
            const auto rows = compare_regimes(sc, parse_regimes(regimes), threshold, settings(common));
            emit(csv, [&](std::ostream& o) { write_compare_csv(rows, o); });
            return kExitOk;
        }
        if (*blocks_cmd) {
            write_blocks_csv(scenario(common).bg, std::cout);
            return kExitOk;
        }
        if (*gen_cmd) {
            gen.seed = seed;
            const RandomInstance ri = random_instance(gen);
            const fs::path dir = out_dir;
            fs::create_directories(dir);
            write_network(NetworkModel::from_data(ri.network), dir / "network.json");
            write_id_values(ri.risk.values, dir / "risk.csv");
            write_id_values(ri.svi.values, dir / "svi.csv");
            fmt::print("seed {}: wrote network.json, risk.csv, svi.csv to {}\n", seed, dir.string());
            return kExitOk;
        }
        if (*red_cmd) return run_reduce(red_in, red_out, red_risk, red_svi, red_risk_out, red_svi_out);
    } catch (const CeilingExceeded& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kExitInfeasible;
    } catch (const std::exception& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kExitInput;
    }
    return kExitInput;
}
