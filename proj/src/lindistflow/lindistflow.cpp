/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/lindistflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrisk {

namespace {

const double kSqrt3 = std::sqrt(3.0);

// -1 for (a,b), (b,c), (c,a); +1 for the reverse pairs.
double rotation_sign(Phase from, Phase to) {
    const int d = (index_of(to) - index_of(from) + 3) % 3;
    return d == 1 ? -1.0 : 1.0;
}

PhaseColumns no_columns() { return {kNoColumn, kNoColumn, kNoColumn}; }

double thermal_box(double s_max_kva, double base_kva) {
    if (s_max_kva <= 0.0) return kInf;
    return s_max_kva / std::sqrt(2.0) / base_kva;
}

}  // namespace

SensitivityMatrices build_sensitivity_matrices(const LineSegment& line, double z_base) {
    if (!line.r.is_symmetric() || !line.x.is_symmetric())
        throw std::invalid_argument(fmt::format("line '{}': impedance matrices must be symmetric", line.id));
    const int n = line.phases.size();
    if (line.r.dim != n || line.x.dim != n)
        throw std::invalid_argument(fmt::format("line '{}': impedance dimension does not match phases", line.id));
    SensitivityMatrices m{line.phases, PhaseMatrix(n), PhaseMatrix(n)};
    const auto ph = line.phases.phases();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double r = line.r(i, j) / z_base, x = line.x(i, j) / z_base;
            if (i == j) {
                m.mp(i, j) = -2.0 * r;
                m.mq(i, j) = -2.0 * x;
            } else {
                const double s = rotation_sign(ph[static_cast<std::size_t>(i)], ph[static_cast<std::size_t>(j)]);
                m.mp(i, j) = r + s * kSqrt3 * x;
                m.mq(i, j) = x - s * kSqrt3 * r;
            }
        }
    }
    return m;
}

DispatchLp assemble_dispatch_lp(const NetworkModel& net, const BlockGraph& bg, const std::vector<Island>& islands,
                                const std::vector<char>& energized) {
    if (energized.size() != islands.size()) throw std::invalid_argument("assemble_dispatch_lp: size mismatch");
    const double base = net.base_kva();
    const auto& buses = net.buses();
    const auto& edges = net.edges();
    DispatchLp d;
    d.w.assign(buses.size(), no_columns());
    d.p.assign(edges.size(), no_columns());
    d.q.assign(edges.size(), no_columns());
    d.pg.assign(net.sources().size(), no_columns());
    d.qg.assign(net.sources().size(), no_columns());
    d.pgn.assign(net.sources().size(), no_columns());
    d.qgn.assign(net.sources().size(), no_columns());
    LpProblem& lp = d.lp;

    std::vector<char> bus_on(buses.size(), 0), switch_on(net.switches().size(), 0);
    std::vector<long> forming_of_bus(buses.size(), -1);
    for (std::size_t k = 0; k < islands.size(); ++k) {
        if (!energized[k]) continue;
        const Island& isl = islands[k];
        if (!isl.forming_source) throw std::invalid_argument("assemble_dispatch_lp: energized island without forming source");
        for (std::size_t b : isl.blocks)
            for (std::size_t bus : bg.blocks[b].buses) bus_on[bus] = 1;
        for (std::size_t s : isl.switches) switch_on[s] = 1;
        const std::size_t fb = net.source_bus(*isl.forming_source);
        forming_of_bus[fb] = static_cast<long>(*isl.forming_source);
        d.forming_bus.push_back(fb);
    }

    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (!bus_on[i]) continue;
        const Bus& b = buses[i];
        for (Phase ph : b.phases.phases()) {
            const auto name = fmt::format("W_{}_{}", b.id, to_char(ph));
            if (forming_of_bus[i] >= 0)
                d.w[i][index_of(ph)] = lp.add_column(1.0, 1.0, 0.0, name);
            else
                d.w[i][index_of(ph)] = lp.add_column(b.vmin * b.vmin, b.vmax * b.vmax, 0.0, name);
        }
    }

    std::vector<char> edge_on(edges.size(), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Edge& ed = edges[e];
        if (!bus_on[ed.from] || !bus_on[ed.to]) continue;
        if (ed.kind == EdgeKind::switch_ && !switch_on[ed.element]) continue;
        edge_on[e] = 1;
        double lim = kInf;
        if (ed.kind == EdgeKind::line) lim = thermal_box(net.lines()[ed.element].s_max, base);
        if (ed.kind == EdgeKind::switch_) lim = thermal_box(net.switches()[ed.element].s_max, base);
        for (Phase ph : ed.phases.phases()) {
            d.p[e][index_of(ph)] = lp.add_column(-lim, lim, 0.0, fmt::format("P_{}_{}", e, to_char(ph)));
            d.q[e][index_of(ph)] = lp.add_column(-lim, lim, 0.0, fmt::format("Q_{}_{}", e, to_char(ph)));
        }
    }

    const auto& sources = net.sources();
    for (std::size_t s = 0; s < sources.size(); ++s) {
        const std::size_t bus = net.source_bus(s);
        if (!bus_on[bus]) continue;
        const DistributedSource& src = sources[s];
        // The substation feeds only while it is the island's grid-forming source.
        if (src.kind == SourceKind::substation_source && forming_of_bus[bus] != static_cast<long>(s)) continue;
        for (Phase ph : src.pmax.phases.phases()) {
            const int k = index_of(ph);
            const double lo_p = src.pmin(ph) / base, hi_p = src.pmax[ph] / base;
            const double lo_q = src.qmin[ph] / base, hi_q = src.qmax[ph] / base;
            // Injection = positive part - negative part, each costed at one.
            d.pg[s][k] = lp.add_column(std::max(lo_p, 0.0), std::max(hi_p, 0.0), 1.0,
                                       fmt::format("pg_{}_{}", src.id, to_char(ph)));
            d.qg[s][k] = lp.add_column(std::max(lo_q, 0.0), std::max(hi_q, 0.0), 1.0,
                                       fmt::format("qg_{}_{}", src.id, to_char(ph)));
            if (lo_p < 0.0)
                d.pgn[s][k] = lp.add_column(std::max(-hi_p, 0.0), -lo_p, 1.0, fmt::format("pgn_{}_{}", src.id, to_char(ph)));
            if (lo_q < 0.0)
                d.qgn[s][k] = lp.add_column(std::max(-hi_q, 0.0), -lo_q, 1.0, fmt::format("qgn_{}_{}", src.id, to_char(ph)));
        }
    }

    // Flow balance per energized bus and phase.
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (!bus_on[i]) continue;
        for (Phase ph : buses[i].phases.phases()) {
            const int pi = index_of(ph);
            std::vector<std::pair<std::size_t, double>> rp, rq;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (!edge_on[e] || !edges[e].phases.contains(ph)) continue;
                const double sgn = edges[e].to == i ? 1.0 : (edges[e].from == i ? -1.0 : 0.0);
                if (sgn == 0.0) continue;
                rp.emplace_back(d.p[e][pi], sgn);
                rq.emplace_back(d.q[e][pi], sgn);
            }
            for (std::size_t s : net.sources_at(i)) {
                if (d.pg[s][pi] == kNoColumn) continue;
                rp.emplace_back(d.pg[s][pi], 1.0);
                rq.emplace_back(d.qg[s][pi], 1.0);
                if (d.pgn[s][pi] != kNoColumn) rp.emplace_back(d.pgn[s][pi], -1.0);
                if (d.qgn[s][pi] != kNoColumn) rq.emplace_back(d.qgn[s][pi], -1.0);
            }
            double pd = 0.0, qd = 0.0;
            for (std::size_t l : net.loads_at(i)) {
                pd += net.loads()[l].pd[ph];
                qd += net.loads()[l].qd[ph];
            }
            pd /= base;
            qd /= base;
            const std::string& id = buses[i].id;
            lp.add_row(std::move(rp), pd, pd, fmt::format("balP_{}_{}", id, to_char(ph)));
            lp.add_row(std::move(rq), qd, qd, fmt::format("balQ_{}_{}", id, to_char(ph)));
        }
    }

    // Voltage drop per energized edge and phase; switches and transformers have none.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!edge_on[e]) continue;
        const Edge& ed = edges[e];
        const auto ph = ed.phases.phases();
        std::optional<SensitivityMatrices> m;
        if (ed.kind == EdgeKind::line) m = build_sensitivity_matrices(net.lines()[ed.element], net.z_base());
        for (std::size_t i = 0; i < ph.size(); ++i) {
            const int pi = index_of(ph[i]);
            std::vector<std::pair<std::size_t, double>> row{{d.w[ed.from][pi], 1.0}, {d.w[ed.to][pi], -1.0}};
            if (m) {
                for (std::size_t j = 0; j < ph.size(); ++j) {
                    const int pj = index_of(ph[j]);
                    const double a = m->mp(static_cast<int>(i), static_cast<int>(j));
                    const double b = m->mq(static_cast<int>(i), static_cast<int>(j));
                    if (a != 0.0) row.emplace_back(d.p[e][pj], a);
                    if (b != 0.0) row.emplace_back(d.q[e][pj], b);
                }
            }
            lp.add_row(std::move(row), 0.0, 0.0, fmt::format("drop_{}_{}", e, to_char(ph[i])));
        }
    }
    return d;
}

DispatchSolution solve_dispatch(const NetworkModel& net, const BlockGraph& bg, const std::vector<Island>& islands,
                                const std::vector<char>& energized, const LpOptions& opt) {
    DispatchLp d = assemble_dispatch_lp(net, bg, islands, energized);
    const LpSolution lps = solve_lp(d.lp, opt);
    const auto& buses = net.buses();
    const auto& edges = net.edges();
    const double base = net.base_kva();

    DispatchSolution sol;
    sol.status = lps.status;
    sol.feasible = lps.status == LpStatus::optimal;
    sol.pg.assign(net.sources().size(), PhaseValues{});
    sol.qg.assign(net.sources().size(), PhaseValues{});
    sol.p.assign(edges.size(), PhaseValues{});
    sol.q.assign(edges.size(), PhaseValues{});
    sol.w.assign(buses.size(), PhaseValues{});
    sol.bus_energized.assign(buses.size(), 0);
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (d.w[i][0] != kNoColumn || d.w[i][1] != kNoColumn || d.w[i][2] != kNoColumn)
            sol.bus_energized[i] = 1;
    if (!sol.feasible) return sol;

    auto val = [&](std::size_t col) {
        const double v = lps.x[col];
        return std::abs(v) < 1e-12 ? 0.0 : v;
    };
    // Per-unit flows after snapping, used for voltage recomputation.
    std::vector<std::array<double, 3>> ppu(edges.size(), {0, 0, 0}), qpu(edges.size(), {0, 0, 0});
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (Phase ph : edges[e].phases.phases()) {
            const int k = index_of(ph);
            if (d.p[e][k] == kNoColumn) continue;
            ppu[e][k] = val(d.p[e][k]);
            qpu[e][k] = val(d.q[e][k]);
            sol.p[e].set(ph, ppu[e][k] * base);
            sol.q[e].set(ph, qpu[e][k] * base);
        }
    for (std::size_t s = 0; s < net.sources().size(); ++s)
        for (Phase ph : net.sources()[s].pmax.phases.phases()) {
            const int k = index_of(ph);
            if (d.pg[s][k] == kNoColumn) continue;
            const double pn = d.pgn[s][k] == kNoColumn ? 0.0 : lps.x[d.pgn[s][k]];
            const double qn = d.qgn[s][k] == kNoColumn ? 0.0 : lps.x[d.qgn[s][k]];
            auto snap = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
            sol.pg[s].set(ph, snap(lps.x[d.pg[s][k]] - pn) * base);
            sol.qg[s].set(ph, snap(lps.x[d.qg[s][k]] - qn) * base);
        }
    std::vector<std::array<double, 3>> w(buses.size(), {0, 0, 0});
    for (std::size_t i = 0; i < buses.size(); ++i)
        for (int k = 0; k < 3; ++k)
            if (d.w[i][k] != kNoColumn) w[i][k] = lps.x[d.w[i][k]];

    // Recompute W outward from each forming bus along energized edges.
    std::vector<std::vector<std::size_t>> adj(buses.size());
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (d.p[e][0] != kNoColumn || d.p[e][1] != kNoColumn || d.p[e][2] != kNoColumn) {
            adj[edges[e].from].push_back(e);
            adj[edges[e].to].push_back(e);
        }
    std::vector<char> seen(buses.size(), 0);
    for (std::size_t root : d.forming_bus) {
        std::deque<std::size_t> queue{root};
        seen[root] = 1;
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t e : adj[u]) {
                const Edge& ed = edges[e];
                const std::size_t v = ed.from == u ? ed.to : ed.from;
                if (seen[v]) continue;
                seen[v] = 1;
                const auto ph = ed.phases.phases();
                std::optional<SensitivityMatrices> m;
                if (ed.kind == EdgeKind::line) m = build_sensitivity_matrices(net.lines()[ed.element], net.z_base());
                for (std::size_t i = 0; i < ph.size(); ++i) {
                    double drop = 0.0;  // W_to - W_from
                    if (m)
                        for (std::size_t j = 0; j < ph.size(); ++j) {
                            const int pj = index_of(ph[j]);
                            drop += m->mp(static_cast<int>(i), static_cast<int>(j)) * ppu[e][pj] +
                                    m->mq(static_cast<int>(i), static_cast<int>(j)) * qpu[e][pj];
                        }
                    const int pi = index_of(ph[i]);
                    w[v][pi] = ed.from == u ? w[u][pi] + drop : w[u][pi] - drop;
                }
                queue.push_back(v);
            }
        }
    }
    for (std::size_t i = 0; i < buses.size(); ++i)
        for (Phase ph : buses[i].phases.phases())
            if (d.w[i][index_of(ph)] != kNoColumn) sol.w[i].set(ph, w[i][index_of(ph)]);
    return sol;
}

DispatchResiduals dispatch_residuals(const NetworkModel& net, const DispatchSolution& sol) {
    DispatchResiduals r;
    const double base = net.base_kva();
    const auto& edges = net.edges();
    std::vector<char> edge_on(edges.size(), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) edge_on[e] = !sol.p[e].phases.empty();

    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!edge_on[e]) continue;
        const Edge& ed = edges[e];
        const auto ph = ed.phases.phases();
        std::optional<SensitivityMatrices> m;
        if (ed.kind == EdgeKind::line) m = build_sensitivity_matrices(net.lines()[ed.element], net.z_base());
        for (std::size_t i = 0; i < ph.size(); ++i) {
            double res = sol.w[ed.from][ph[i]] - sol.w[ed.to][ph[i]];
            if (m)
                for (std::size_t j = 0; j < ph.size(); ++j)
                    res += m->mp(static_cast<int>(i), static_cast<int>(j)) * sol.p[e][ph[j]] / base +
                           m->mq(static_cast<int>(i), static_cast<int>(j)) * sol.q[e][ph[j]] / base;
            r.voltage_drop = std::max(r.voltage_drop, std::abs(res));
        }
    }
    for (std::size_t i = 0; i < net.buses().size(); ++i) {
        if (!sol.bus_energized[i]) continue;
        for (Phase ph : net.buses()[i].phases.phases()) {
            double bp = 0.0, bq = 0.0;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (!edge_on[e] || !edges[e].phases.contains(ph)) continue;
                if (edges[e].to == i) bp += sol.p[e][ph], bq += sol.q[e][ph];
                if (edges[e].from == i) bp -= sol.p[e][ph], bq -= sol.q[e][ph];
            }
            for (std::size_t s : net.sources_at(i)) bp += sol.pg[s][ph], bq += sol.qg[s][ph];
            for (std::size_t l : net.loads_at(i)) bp -= net.loads()[l].pd[ph], bq -= net.loads()[l].qd[ph];
            r.p_balance = std::max(r.p_balance, std::abs(bp) / base);
            r.q_balance = std::max(r.q_balance, std::abs(bq) / base);
        }
    }
    return r;
}

}  // namespace mgrisk
