/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/milp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/core.h>
#include <fmt/ostream.h>

namespace mgrisk {

std::size_t MilpModel::add_column(std::string nm, bool integer, double lower, double upper, double cost) {
    if (!col_index_.emplace(nm, columns.size()).second) throw std::logic_error("duplicate column " + nm);
    columns.push_back(Column{std::move(nm), integer, lower, upper, cost});
    return columns.size() - 1;
}

std::size_t MilpModel::add_row(std::string nm, RowType type, double rhs,
                               std::vector<std::pair<std::size_t, double>> coefs) {
    if (!row_index_.emplace(nm, rows.size()).second) throw std::logic_error("duplicate row " + nm);
    rows.push_back(Row{std::move(nm), type, rhs, std::move(coefs)});
    return rows.size() - 1;
}

std::size_t MilpModel::column(const std::string& nm) const { return col_index_.at(nm); }
std::size_t MilpModel::row(const std::string& nm) const { return row_index_.at(nm); }

std::size_t MilpModel::integer_count() const {
    return static_cast<std::size_t>(std::count_if(columns.begin(), columns.end(), [](const Column& c) { return c.integer; }));
}

namespace {

using RT = MilpModel::RowType;
using Coefs = std::vector<std::pair<std::size_t, double>>;

std::string edge_name(const NetworkModel& net, const Edge& e) {
    switch (e.kind) {
        case EdgeKind::line: return net.lines()[e.element].id;
        case EdgeKind::switch_: return net.switches()[e.element].id;
        case EdgeKind::transformer: return net.transformers()[e.element].id;
    }
    return {};
}

double binary_upper(Domain d) { return d == Domain::fixed_off ? 0.0 : 1.0; }
double binary_lower(Domain d) { return d == Domain::fixed_on ? 1.0 : 0.0; }

// Column layout shared by build_milp and milp_point.
struct Layout {
    std::vector<std::size_t> zbl, zsw, fr, fsp, fsn;
    std::vector<std::size_t> zinv, zfe;  // per source; kNoColumn when not forming-capable
    std::vector<PhaseColumns> w, p, q, pg, qg;
};

double flow_limit(const NetworkModel& net) {
    double s = 0.0;
    for (const auto& l : net.loads()) s += std::abs(l.pd.total()) + std::abs(l.qd.total());
    for (const auto& g : net.sources())
        for (Phase ph : g.pmax.phases.phases())
            s += g.pmax[ph] + std::max(std::abs(g.qmin[ph]), std::abs(g.qmax[ph]));
    return s / net.base_kva() + 1.0;
}

}  // namespace

MilpModel build_milp(const OmcpInstance& inst) {
    const NetworkModel& net = *inst.net;
    const BlockGraph& bg = inst.bg;
    const double base = net.base_kva();
    const auto& buses = net.buses();
    const auto& edges = net.edges();
    const auto& srcs = net.sources();
    const double nblk = static_cast<double>(bg.size());

    MilpModel m;
    Layout L;
    double wmax = 0.0;
    for (const Bus& b : buses) wmax = std::max(wmax, b.vmax * b.vmax);
    wmax = std::max(wmax, 1.0);
    const double big_flow = flow_limit(net);

    // Binaries first, bracketed by integer markers on output.
    double constant = 0.0;
    for (std::size_t b = 0; b < bg.size(); ++b) {
        L.zbl.push_back(m.add_column(fmt::format("zbl_{}", bg.blocks[b].id), true, 0, 1, -inst.block_cost[b]));
        constant += inst.block_cost[b];
    }
    m.objective_constant = constant;
    for (std::size_t i = 0; i < bg.edges.size(); ++i)
        L.zsw.push_back(m.add_column("zsw_" + bg.edges[i].switch_id, true, binary_lower(inst.switch_domain[i]),
                                     binary_upper(inst.switch_domain[i])));
    L.zinv.assign(srcs.size(), kNoColumn);
    L.zfe.assign(srcs.size(), kNoColumn);
    for (std::size_t s = 0; s < srcs.size(); ++s)
        if (srcs[s].forming_capable())
            L.zinv[s] = m.add_column("zinv_" + srcs[s].id, true, binary_lower(inst.inverter_domain[s]),
                                     binary_upper(inst.inverter_domain[s]));

    for (std::size_t s = 0; s < srcs.size(); ++s)
        if (L.zinv[s] != kNoColumn) L.zfe[s] = m.add_column("zfe_" + srcs[s].id, false, 0, 1);
    for (std::size_t b = 0; b < bg.size(); ++b)
        L.fr.push_back(m.add_column(fmt::format("fr_{}", bg.blocks[b].id), false, 0, nblk));
    for (std::size_t i = 0; i < bg.edges.size(); ++i) {
        L.fsp.push_back(m.add_column("fsp_" + bg.edges[i].switch_id, false, 0, nblk));
        L.fsn.push_back(m.add_column("fsn_" + bg.edges[i].switch_id, false, 0, nblk));
    }
    const PhaseColumns none{kNoColumn, kNoColumn, kNoColumn};
    L.w.assign(buses.size(), none);
    for (std::size_t i = 0; i < buses.size(); ++i)
        for (Phase ph : buses[i].phases.phases())
            L.w[i][index_of(ph)] = m.add_column(fmt::format("w_{}_{}", buses[i].id, to_char(ph)), false, 0, wmax);
    L.p.assign(edges.size(), none);
    L.q.assign(edges.size(), none);
    std::vector<double> lim(edges.size(), big_flow);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Edge& ed = edges[e];
        double smax = 0.0;
        if (ed.kind == EdgeKind::line) smax = net.lines()[ed.element].s_max;
        if (ed.kind == EdgeKind::switch_) smax = net.switches()[ed.element].s_max;
        if (smax > 0) lim[e] = smax / std::sqrt(2.0) / base;
        const std::string nm = edge_name(net, ed);
        for (Phase ph : ed.phases.phases()) {
            L.p[e][index_of(ph)] = m.add_column(fmt::format("p_{}_{}", nm, to_char(ph)), false, -lim[e], lim[e]);
            L.q[e][index_of(ph)] = m.add_column(fmt::format("q_{}_{}", nm, to_char(ph)), false, -lim[e], lim[e]);
        }
    }
    L.pg.assign(srcs.size(), none);
    L.qg.assign(srcs.size(), none);
    for (std::size_t s = 0; s < srcs.size(); ++s)
        for (Phase ph : srcs[s].pmax.phases.phases()) {
            const auto& g = srcs[s];
            L.pg[s][index_of(ph)] = m.add_column(fmt::format("pg_{}_{}", g.id, to_char(ph)), false,
                                                 std::min(g.pmin(ph), 0.0) / base, std::max(g.pmax[ph], 0.0) / base);
            L.qg[s][index_of(ph)] = m.add_column(fmt::format("qg_{}_{}", g.id, to_char(ph)), false,
                                                 std::min(g.qmin[ph], 0.0) / base, std::max(g.qmax[ph], 0.0) / base);
        }

    // Topology.
    {
        Coefs forest;
        for (std::size_t i = 0; i < bg.edges.size(); ++i) forest.emplace_back(L.zsw[i], 1.0);
        for (std::size_t b = 0; b < bg.size(); ++b) forest.emplace_back(L.zbl[b], -1.0);
        for (std::size_t s = 0; s < srcs.size(); ++s)
            if (L.zfe[s] != kNoColumn) forest.emplace_back(L.zfe[s], 1.0);
        m.add_row("forest", RT::equal, 0.0, std::move(forest));
    }
    {
        Coefs risk;
        for (std::size_t b = 0; b < bg.size(); ++b) risk.emplace_back(L.zbl[b], bg.blocks[b].risk);
        if (inst.policy.include_switch_risk)
            for (std::size_t i = 0; i < bg.edges.size(); ++i) risk.emplace_back(L.zsw[i], bg.edges[i].risk);
        m.add_row("risk", RT::less, inst.policy.threshold * inst.policy.total, std::move(risk));
    }
    for (std::size_t i = 0; i < bg.edges.size(); ++i) {
        const auto& e = bg.edges[i];
        m.add_row("swa_" + e.switch_id, RT::less, 0.0, {{L.zsw[i], 1.0}, {L.zbl[e.a], -1.0}});
        if (e.b != e.a) m.add_row("swb_" + e.switch_id, RT::less, 0.0, {{L.zsw[i], 1.0}, {L.zbl[e.b], -1.0}});
        m.add_row("cfp_" + e.switch_id, RT::less, 0.0, {{L.fsp[i], 1.0}, {L.zsw[i], -nblk}});
        m.add_row("cfn_" + e.switch_id, RT::less, 0.0, {{L.fsn[i], 1.0}, {L.zsw[i], -nblk}});
    }
    for (std::size_t b = 0; b < bg.size(); ++b) {
        Coefs inv, cap{{L.fr[b], 1.0}};
        for (std::size_t s : bg.blocks[b].forming_sources) {
            inv.emplace_back(L.zinv[s], 1.0);
            cap.emplace_back(L.zfe[s], -nblk);
        }
        const int id = bg.blocks[b].id;
        if (!inv.empty()) m.add_row(fmt::format("inv_{}", id), RT::less, 1.0, std::move(inv));
        m.add_row(fmt::format("cfr_{}", id), RT::less, 0.0, std::move(cap));
        Coefs bal{{L.fr[b], 1.0}, {L.zbl[b], -1.0}};
        for (std::size_t i = 0; i < bg.edges.size(); ++i) {
            const auto& e = bg.edges[i];
            if (e.a == e.b) continue;
            if (e.b == b) bal.emplace_back(L.fsp[i], 1.0), bal.emplace_back(L.fsn[i], -1.0);
            if (e.a == b) bal.emplace_back(L.fsn[i], 1.0), bal.emplace_back(L.fsp[i], -1.0);
        }
        m.add_row(fmt::format("fbal_{}", id), RT::equal, 0.0, std::move(bal));
    }
    for (std::size_t s = 0; s < srcs.size(); ++s) {
        if (L.zfe[s] == kNoColumn) continue;
        const std::size_t blk = L.zbl[bg.block_of_source(s)];
        const std::string& id = srcs[s].id;
        m.add_row("fea_" + id, RT::less, 0.0, {{L.zfe[s], 1.0}, {L.zinv[s], -1.0}});
        m.add_row("feb_" + id, RT::less, 0.0, {{L.zfe[s], 1.0}, {blk, -1.0}});
        m.add_row("fec_" + id, RT::greater, -1.0, {{L.zfe[s], 1.0}, {L.zinv[s], -1.0}, {blk, -1.0}});
    }

    // Voltage limits and forming references.
    for (std::size_t i = 0; i < buses.size(); ++i) {
        const std::size_t blk = L.zbl[bg.block_of_bus(i)];
        for (Phase ph : buses[i].phases.phases()) {
            const std::size_t wc = L.w[i][index_of(ph)];
            const std::string sfx = fmt::format("{}_{}", buses[i].id, to_char(ph));
            m.add_row("vlo_" + sfx, RT::greater, 0.0, {{wc, 1.0}, {blk, -buses[i].vmin * buses[i].vmin}});
            m.add_row("vhi_" + sfx, RT::less, buses[i].vmax * buses[i].vmax, {{wc, 1.0}});
            for (std::size_t s : net.sources_at(i)) {
                if (L.zinv[s] == kNoColumn) continue;
                const std::string nm = fmt::format("{}_{}", srcs[s].id, to_char(ph));
                m.add_row("refu_" + nm, RT::less, 1.0 + wmax, {{wc, 1.0}, {L.zinv[s], wmax}});
                m.add_row("refl_" + nm, RT::greater, 1.0 - wmax, {{wc, 1.0}, {L.zinv[s], -wmax}});
            }
        }
    }

    // Flow activation and voltage drop.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Edge& ed = edges[e];
        const std::size_t act = ed.kind == EdgeKind::switch_ ? L.zsw[ed.element] : L.zbl[bg.block_of_bus(ed.from)];
        const std::string nm = edge_name(net, ed);
        const auto ph = ed.phases.phases();
        for (Phase f : ph) {
            const std::string sfx = fmt::format("{}_{}", nm, to_char(f));
            const int k = index_of(f);
            m.add_row("pu_" + sfx, RT::less, 0.0, {{L.p[e][k], 1.0}, {act, -lim[e]}});
            m.add_row("pl_" + sfx, RT::greater, 0.0, {{L.p[e][k], 1.0}, {act, lim[e]}});
            m.add_row("qu_" + sfx, RT::less, 0.0, {{L.q[e][k], 1.0}, {act, -lim[e]}});
            m.add_row("ql_" + sfx, RT::greater, 0.0, {{L.q[e][k], 1.0}, {act, lim[e]}});
        }
        std::optional<SensitivityMatrices> sm;
        if (ed.kind == EdgeKind::line) sm = build_sensitivity_matrices(net.lines()[ed.element], net.z_base());
        for (std::size_t i = 0; i < ph.size(); ++i) {
            const int k = index_of(ph[i]);
            Coefs row{{L.w[ed.from][k], 1.0}, {L.w[ed.to][k], -1.0}};
            if (sm)
                for (std::size_t j = 0; j < ph.size(); ++j) {
                    const int kj = index_of(ph[j]);
                    const double a = sm->mp(static_cast<int>(i), static_cast<int>(j));
                    const double b = sm->mq(static_cast<int>(i), static_cast<int>(j));
                    if (a != 0.0) row.emplace_back(L.p[e][kj], a);
                    if (b != 0.0) row.emplace_back(L.q[e][kj], b);
                }
            Coefs lo = row;
            row.emplace_back(act, wmax);
            lo.emplace_back(act, -wmax);
            const std::string sfx = fmt::format("{}_{}", nm, to_char(ph[i]));
            m.add_row("du_" + sfx, RT::less, wmax, std::move(row));
            m.add_row("dl_" + sfx, RT::greater, -wmax, std::move(lo));
        }
    }

    // Generation limits (active only on energized blocks) and nodal balance.
    for (std::size_t s = 0; s < srcs.size(); ++s) {
        const auto& g = srcs[s];
        const std::size_t blk = L.zbl[bg.block_of_source(s)];
        for (Phase ph : g.pmax.phases.phases()) {
            const int k = index_of(ph);
            const std::string sfx = fmt::format("{}_{}", g.id, to_char(ph));
            m.add_row("gpu_" + sfx, RT::less, 0.0, {{L.pg[s][k], 1.0}, {blk, -g.pmax[ph] / base}});
            m.add_row("gpl_" + sfx, RT::greater, 0.0, {{L.pg[s][k], 1.0}, {blk, -g.pmin(ph) / base}});
            m.add_row("gqu_" + sfx, RT::less, 0.0, {{L.qg[s][k], 1.0}, {blk, -g.qmax[ph] / base}});
            m.add_row("gql_" + sfx, RT::greater, 0.0, {{L.qg[s][k], 1.0}, {blk, -g.qmin[ph] / base}});
            if (g.kind == SourceKind::substation_source) {
                const double cap = std::max({g.pmax[ph], std::abs(g.qmin[ph]), std::abs(g.qmax[ph])}) / base;
                m.add_row("spu_" + sfx, RT::less, 0.0, {{L.pg[s][k], 1.0}, {L.zinv[s], -cap}});
                m.add_row("spl_" + sfx, RT::greater, 0.0, {{L.pg[s][k], 1.0}, {L.zinv[s], cap}});
                m.add_row("squ_" + sfx, RT::less, 0.0, {{L.qg[s][k], 1.0}, {L.zinv[s], -cap}});
                m.add_row("sql_" + sfx, RT::greater, 0.0, {{L.qg[s][k], 1.0}, {L.zinv[s], cap}});
            }
        }
    }
    for (std::size_t i = 0; i < buses.size(); ++i) {
        const std::size_t blk = L.zbl[bg.block_of_bus(i)];
        for (Phase ph : buses[i].phases.phases()) {
            const int k = index_of(ph);
            Coefs bp, bq;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (!edges[e].phases.contains(ph)) continue;
                if (edges[e].to == i) bp.emplace_back(L.p[e][k], 1.0), bq.emplace_back(L.q[e][k], 1.0);
                if (edges[e].from == i) bp.emplace_back(L.p[e][k], -1.0), bq.emplace_back(L.q[e][k], -1.0);
            }
            for (std::size_t s : net.sources_at(i))
                if (L.pg[s][k] != kNoColumn) bp.emplace_back(L.pg[s][k], 1.0), bq.emplace_back(L.qg[s][k], 1.0);
            double pd = 0.0, qd = 0.0;
            for (std::size_t l : net.loads_at(i)) pd += net.loads()[l].pd[ph], qd += net.loads()[l].qd[ph];
            if (pd != 0.0) bp.emplace_back(blk, -pd / base);
            if (qd != 0.0) bq.emplace_back(blk, -qd / base);
            const std::string sfx = fmt::format("{}_{}", buses[i].id, to_char(ph));
            m.add_row("bp_" + sfx, RT::equal, 0.0, std::move(bp));
            m.add_row("bq_" + sfx, RT::equal, 0.0, std::move(bq));
        }
    }
    return m;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

// Fixed-format field starts are columns 2, 5, 15, 25, 40, 50.
void entry(std::ostream& out, const std::string& f2, const std::string& f3, const std::string& f4) {
    fmt::print(out, "    {:<8}  {:<8}  {}\n", f2, f3, f4);
}

}  // namespace

void write_mps(const MilpModel& m, std::ostream& out) {
    fmt::print(out, "NAME          {}\n", m.name);
    fmt::print(out, "ROWS\n");
    fmt::print(out, " N  obj\n");
    for (const auto& r : m.rows) fmt::print(out, " {}  {}\n", static_cast<char>(r.type), r.name);

    std::vector<std::vector<std::pair<std::size_t, double>>> by_col(m.columns.size());
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        for (auto [j, a] : m.rows[i].coefs) by_col[j].emplace_back(i, a);

    fmt::print(out, "COLUMNS\n");
    bool in_int = false;
    int marker = 0;
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
        const auto& c = m.columns[j];
        if (c.integer != in_int) {
            fmt::print(out, "    MARKER{:<4}  'MARKER'                 '{}'\n", marker++, c.integer ? "INTORG" : "INTEND");
            in_int = c.integer;
        }
        if (c.cost != 0.0) entry(out, c.name, "obj", num(c.cost));
        for (auto [i, a] : by_col[j]) entry(out, c.name, m.rows[i].name, num(a));
        if (c.cost == 0.0 && by_col[j].empty()) entry(out, c.name, "obj", "0");
    }
    if (in_int) fmt::print(out, "    MARKER{:<4}  'MARKER'                 'INTEND'\n", marker++);

    fmt::print(out, "RHS\n");
    if (m.objective_constant != 0.0) entry(out, "RHS", "obj", num(-m.objective_constant));
    for (const auto& r : m.rows)
        if (r.rhs != 0.0) entry(out, "RHS", r.name, num(r.rhs));

    fmt::print(out, "BOUNDS\n");
    for (const auto& c : m.columns) {
        if (c.integer && c.lower == 0.0 && c.upper == 1.0) {
            fmt::print(out, " BV BND       {}\n", c.name);
            continue;
        }
        if (c.lower == c.upper) {
            fmt::print(out, " FX BND       {:<8}  {}\n", c.name, num(c.lower));
            continue;
        }
        if (std::isinf(c.lower)) fmt::print(out, " MI BND       {}\n", c.name);
        else if (c.lower != 0.0) fmt::print(out, " LO BND       {:<8}  {}\n", c.name, num(c.lower));
        if (std::isfinite(c.upper)) fmt::print(out, " UP BND       {:<8}  {}\n", c.name, num(c.upper));
    }
    fmt::print(out, "ENDATA\n");
}

void export_milp(const OmcpInstance& inst, const std::filesystem::path& path) {
    const MilpModel m = build_milp(inst);
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    write_mps(m, out);
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

std::vector<double> milp_point(const MilpModel& m, const OmcpInstance& inst, const Configuration& c) {
    const NetworkModel& net = *inst.net;
    const BlockGraph& bg = inst.bg;
    const double base = net.base_kva();
    std::vector<double> x(m.columns.size(), 0.0);
    auto set = [&](const std::string& nm, double v) { x[m.column(nm)] = v; };

    for (std::size_t b = 0; b < bg.size(); ++b) set(fmt::format("zbl_{}", bg.blocks[b].id), c.block_energized[b]);
    for (std::size_t i = 0; i < bg.edges.size(); ++i) set("zsw_" + bg.edges[i].switch_id, c.switch_closed[i]);
    const auto& srcs = net.sources();
    for (std::size_t s = 0; s < srcs.size(); ++s) {
        if (!srcs[s].forming_capable()) continue;
        set("zinv_" + srcs[s].id, c.forming[s]);
        set("zfe_" + srcs[s].id, c.forming[s] && c.block_energized[bg.block_of_source(s)] ? 1.0 : 0.0);
    }

    // Connectivity flow: each energized island is a tree rooted at its forming block.
    for (const Island& isl : c.islands) {
        if (!isl.forming_source || !c.block_energized[isl.blocks.front()]) continue;
        const std::size_t root = bg.block_of_source(*isl.forming_source);
        set(fmt::format("fr_{}", bg.blocks[root].id), static_cast<double>(isl.blocks.size()));
        // Subtree sizes by DFS over closed switches of the island.
        std::map<std::size_t, std::vector<std::size_t>> adj;
        for (std::size_t i : isl.switches) adj[bg.edges[i].a].push_back(i), adj[bg.edges[i].b].push_back(i);
        auto dfs = [&](auto&& self, std::size_t u, long via) -> double {
            double size = 1.0;
            for (std::size_t i : adj[u]) {
                if (static_cast<long>(i) == via) continue;
                const auto& e = bg.edges[i];
                const std::size_t v = e.a == u ? e.b : e.a;
                const double sub = self(self, v, static_cast<long>(i));
                set((e.a == u ? "fsp_" : "fsn_") + e.switch_id, sub);
                size += sub;
            }
            return size;
        };
        dfs(dfs, root, -1);
    }

    const auto& d = c.dispatch;
    for (std::size_t i = 0; i < net.buses().size(); ++i)
        for (Phase ph : net.buses()[i].phases.phases()) {
            const std::string nm = fmt::format("w_{}_{}", net.buses()[i].id, to_char(ph));
            double w = d.bus_energized.empty() || !d.bus_energized[i] ? 0.0 : d.w[i][ph];
            for (std::size_t s : net.sources_at(i))
                if (srcs[s].forming_capable() && c.forming[s]) w = d.bus_energized.empty() || !d.bus_energized[i] ? 1.0 : w;
            set(nm, w);
        }
    const auto& edges = net.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string nm = edge_name(net, edges[e]);
        for (Phase ph : edges[e].phases.phases()) {
            if (d.p.empty()) break;
            set(fmt::format("p_{}_{}", nm, to_char(ph)), d.p[e][ph] / base);
            set(fmt::format("q_{}_{}", nm, to_char(ph)), d.q[e][ph] / base);
        }
    }
    for (std::size_t s = 0; s < srcs.size(); ++s)
        for (Phase ph : srcs[s].pmax.phases.phases()) {
            if (d.pg.empty()) break;
            set(fmt::format("pg_{}_{}", srcs[s].id, to_char(ph)), d.pg[s][ph] / base);
            set(fmt::format("qg_{}_{}", srcs[s].id, to_char(ph)), d.qg[s][ph] / base);
        }
    return x;
}

MilpCheck check_point(const MilpModel& m, const std::vector<double>& x) {
    MilpCheck r;
    r.objective = m.objective_constant;
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
        const auto& c = m.columns[j];
        r.objective += c.cost * x[j];
        r.max_bound_violation = std::max({r.max_bound_violation, c.lower - x[j], x[j] - c.upper});
        if (c.integer && x[j] != std::round(x[j])) r.integral = false;
    }
    for (const auto& row : m.rows) {
        double act = 0.0;
        for (auto [j, a] : row.coefs) act += a * x[j];
        double v = 0.0;
        switch (row.type) {
            case RT::equal: v = std::abs(act - row.rhs); break;
            case RT::less: v = act - row.rhs; break;
            case RT::greater: v = row.rhs - act; break;
        }
        if (v > r.max_row_violation) {
            r.max_row_violation = v;
            r.worst_row = row.name;
        }
    }
    return r;
}

}  // namespace mgrisk
