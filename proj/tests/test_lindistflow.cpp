/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "mgrisk/lindistflow.hpp"
#include "mgrisk/network_io.hpp"
#include "mgrisk/random_instance.hpp"

using namespace mgrisk;

namespace {

LineSegment three_phase_line(double raa, double rab, double xaa, double xab) {
    LineSegment l;
    l.id = "l";
    l.phases = PhaseSet::all();
    l.r = PhaseMatrix(3);
    l.x = PhaseMatrix(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            l.r(i, j) = i == j ? raa : rab;
            l.x(i, j) = i == j ? xaa : xab;
        }
    return l;
}

// Everything reachable from the substation under `closed`, one island.
DispatchSolution dispatch_all(const NetworkModel& n, const BlockGraph& bg, const std::vector<char>& closed,
                              const std::vector<char>& forming) {
    const IslandSet s = islands_for(bg, closed, forming);
    REQUIRE(s.feasible());
    std::vector<char> on;
    for (const auto& isl : s.islands) on.push_back(isl.energized());
    return solve_dispatch(n, bg, s.islands, on);
}

std::vector<char> substation_only(const NetworkModel& n) {
    std::vector<char> f(n.sources().size(), 0);
    f[*n.substation_source()] = 1;
    return f;
}

// Brute-force optimum of max c.x over {A x <= b, x >= 0} in two variables by vertex enumeration.
std::optional<double> vertex_max(const std::vector<std::array<double, 3>>& rows, double c0, double c1) {
    std::vector<std::array<double, 3>> all = rows;
    all.push_back({-1, 0, 0});
    all.push_back({0, -1, 0});
    std::optional<double> best;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const double det = all[i][0] * all[j][1] - all[i][1] * all[j][0];
            if (std::abs(det) < 1e-12) continue;
            const double x = (all[i][2] * all[j][1] - all[i][1] * all[j][2]) / det;
            const double y = (all[i][0] * all[j][2] - all[i][2] * all[j][0]) / det;
            bool ok = true;
            for (const auto& r : all) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
            if (ok && (!best || c0 * x + c1 * y > *best)) best = c0 * x + c1 * y;
        }
    return best;
}

}  // namespace

TEST_CASE("sensitivity matrix entries") {
    SUBCASE("mutual coupling example") {
        const SensitivityMatrices m = build_sensitivity_matrices(three_phase_line(0.1, 0.03, 0.2, 0.02));
        CHECK(m.mp(0, 1) == doctest::Approx(0.03 - std::sqrt(3.0) * 0.02).epsilon(1e-15));
        CHECK(std::abs(m.mp(0, 1) - (-0.004641016151377546)) < 1e-15);
        CHECK(m.mp(0, 0) == -0.2);
        CHECK(m.mq(0, 0) == -0.4);
        // same sign pattern on (b,c) and (c,a); the transposed positions flip it
        CHECK(m.mp(1, 2) == m.mp(0, 1));
        CHECK(m.mp(2, 0) == m.mp(0, 1));
        CHECK(m.mp(1, 0) == doctest::Approx(0.03 + std::sqrt(3.0) * 0.02).epsilon(1e-15));
        CHECK(m.mq(0, 1) == doctest::Approx(0.02 + std::sqrt(3.0) * 0.03).epsilon(1e-15));
        CHECK(m.mq(1, 0) == doctest::Approx(0.02 - std::sqrt(3.0) * 0.03).epsilon(1e-15));
    }
    SUBCASE("decoupled phases") {
        const SensitivityMatrices m = build_sensitivity_matrices(three_phase_line(0.1, 0.0, 0.0, 0.0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(m.mp(i, j) == (i == j ? -0.2 : 0.0));
                CHECK(m.mq(i, j) == 0.0);
            }
    }
    SUBCASE("single-phase line") {
        LineSegment l;
        l.phases = PhaseSet{Phase::c};
        l.r = PhaseMatrix(1);
        l.x = PhaseMatrix(1);
        l.r(0, 0) = 0.3;
        l.x(0, 0) = 0.5;
        const SensitivityMatrices m = build_sensitivity_matrices(l);
        REQUIRE(m.mp.dim == 1);
        CHECK(m.mp(0, 0) == -0.6);
        CHECK(m.mq(0, 0) == -1.0);
    }
    SUBCASE("per-unit scaling") {
        const SensitivityMatrices m = build_sensitivity_matrices(three_phase_line(0.1, 0.03, 0.2, 0.02), 4.0);
        CHECK(m.mp(0, 0) == doctest::Approx(-0.05).epsilon(1e-15));
    }
    SUBCASE("asymmetric impedance") {
        LineSegment l = three_phase_line(0.1, 0.03, 0.2, 0.02);
        l.x(0, 2) = 0.5;
        CHECK_THROWS_AS(build_sensitivity_matrices(l), std::invalid_argument);
    }
}

TEST_CASE("small LPs") {
    SUBCASE("maximize x subject to x <= 3") {
        LpProblem p;
        p.sense = LpSense::maximize;
        const auto x = p.add_column(-kInf, kInf, 1.0);
        p.add_row({{x, 1.0}}, -kInf, 3.0);
        const LpSolution s = solve_lp(p);
        REQUIRE(s.status == LpStatus::optimal);
        CHECK(s.x[x] == 3.0);
    }
    SUBCASE("contradictory bounds") {
        LpProblem p;
        const auto x = p.add_column(-kInf, kInf);
        p.add_row({{x, 1.0}}, 1.0, kInf);
        p.add_row({{x, 1.0}}, -kInf, 0.0);
        CHECK(solve_lp(p).status == LpStatus::infeasible);
    }
    SUBCASE("unbounded") {
        LpProblem p;
        p.sense = LpSense::maximize;
        const auto x = p.add_column(0, kInf, 1.0);
        const auto y = p.add_column(0, kInf, 0.0);
        p.add_row({{x, 1.0}, {y, -1.0}}, -kInf, 1.0);
        CHECK(solve_lp(p).status == LpStatus::unbounded);
    }
    SUBCASE("textbook production problem") {
        LpProblem p;
        p.sense = LpSense::maximize;
        const auto x = p.add_column(0, kInf, 3.0);
        const auto y = p.add_column(0, kInf, 5.0);
        p.add_row({{x, 1.0}}, -kInf, 4.0);
        p.add_row({{y, 2.0}}, -kInf, 12.0);
        p.add_row({{x, 3.0}, {y, 2.0}}, -kInf, 18.0);
        const LpSolution s = solve_lp(p);
        REQUIRE(s.status == LpStatus::optimal);
        CHECK(s.objective == doctest::Approx(36.0).epsilon(1e-12));
        CHECK(s.x[x] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(s.x[y] == doctest::Approx(6.0).epsilon(1e-12));
    }
    SUBCASE("equality rows and free variables") {
        LpProblem p;
        const auto a = p.add_column(-kInf, kInf, 1.0);
        const auto b = p.add_column(-kInf, kInf, 1.0);
        p.add_row({{a, 1.0}, {b, -1.0}}, 2.0, 2.0);
        p.add_row({{b, 1.0}}, -1.0, kInf);
        const LpSolution s = solve_lp(p);
        REQUIRE(s.status == LpStatus::optimal);
        CHECK(s.x[a] == doctest::Approx(1.0));
        CHECK(s.x[b] == doctest::Approx(-1.0));
    }
}

TEST_CASE("random two-variable LPs agree with vertex enumeration") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-1.0, 3.0), rhs(1.0, 10.0);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::array<double, 3>> rows;
        const int m = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < m; ++i) rows.push_back({coef(rng), coef(rng), rhs(rng)});
        // Keep the region bounded.
        rows.push_back({1, 1, 20});
        const double c0 = coef(rng), c1 = coef(rng);
        LpProblem p;
        p.sense = LpSense::maximize;
        const auto x = p.add_column(0, kInf, c0);
        const auto y = p.add_column(0, kInf, c1);
        for (const auto& r : rows) p.add_row({{x, r[0]}, {y, r[1]}}, -kInf, r[2]);
        const LpSolution s = solve_lp(p);
        const auto oracle = vertex_max(rows, c0, c1);
        REQUIRE(oracle);  // origin is always feasible
        REQUIRE(s.status == LpStatus::optimal);
        CHECK(s.objective == doctest::Approx(*oracle).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("two-bus single-phase drop matches hand evaluation") {
    const NetworkModel n = parse_network(fixtures::data("two_bus.json"));
    const BlockGraph bg = identify_blocks(n);
    const DispatchSolution d = dispatch_all(n, bg, {}, substation_only(n));
    REQUIRE(d.feasible);
    // P = 1000 kW / 1000 kVA = 1 pu, r = 0.01 ohm / 1 ohm, M^P = -2r.
    const double expected = 1.0 - 2 * 0.01 * 1.0;
    CHECK(std::abs(d.w[*n.bus_index("ld")][Phase::a] - expected) <= 1e-12);
    CHECK(d.w[*n.bus_index("src")][Phase::a] == 1.0);
    CHECK(std::abs(d.p[0][Phase::a] - 1000.0) <= 1e-9);
}

TEST_CASE("supply below demand is infeasible") {
    NetworkData data = parse_network(fixtures::data("two_bus.json")).data();
    data.loads[0].pd.set(Phase::a, 100.0);
    data.sources[0].pmax.set(Phase::a, 50.0);
    const NetworkModel n = NetworkModel::from_data(data);
    const BlockGraph bg = identify_blocks(n);
    const DispatchSolution d = dispatch_all(n, bg, {}, substation_only(n));
    CHECK_FALSE(d.feasible);
    CHECK(d.status == LpStatus::infeasible);
}

TEST_CASE("zero demand gives zero flow and flat voltage") {
    NetworkData data = parse_network(fixtures::data("ieee13.json")).data();
    for (auto& l : data.loads)
        for (Phase p : kAllPhases) l.pd.value[index_of(p)] = 0, l.qd.value[index_of(p)] = 0;
    for (auto& s : data.sources)
        if (s.kind == SourceKind::solar) s.pmax = PhaseValues{s.pmax.phases, {0, 0, 0}};
    const NetworkModel n = NetworkModel::from_data(data);
    const BlockGraph bg = identify_blocks(n);
    std::vector<char> closed{1, 1, 1, 1, 1, 0};
    const DispatchSolution d = dispatch_all(n, bg, closed, substation_only(n));
    REQUIRE(d.feasible);
    for (std::size_t e = 0; e < n.edges().size(); ++e)
        for (Phase p : n.edges()[e].phases.phases()) CHECK(d.p[e][p] == 0.0);
    for (std::size_t i = 0; i < n.buses().size(); ++i)
        for (Phase p : n.buses()[i].phases.phases()) CHECK(d.w[i][p] == 1.0);
}

TEST_CASE("the illustrative energization is dispatch-feasible") {
    const Scenario sc = fixtures::ieee13();
    const NetworkModel& n = *sc.net;
    std::vector<char> forming(n.sources().size(), 0);
    for (std::size_t s = 0; s < forming.size(); ++s)
        forming[s] = n.sources()[s].id == "vsource" || n.sources()[s].id == "bess_684" || n.sources()[s].id == "bess_712";
    const IslandSet isl = islands_for(sc.bg, {0, 1, 0, 0, 0, 0}, forming);
    REQUIRE(isl.feasible());
    std::vector<char> on;
    for (const auto& i : isl.islands) on.push_back(i.energized());
    const DispatchSolution d = solve_dispatch(n, sc.bg, isl.islands, on);
    REQUIRE(d.feasible);
    const DispatchResiduals r = dispatch_residuals(n, d);
    CHECK(r.voltage_drop <= 1e-7);
    CHECK(r.p_balance <= 1e-7);
    CHECK(r.q_balance <= 1e-7);
    // blocks 3 and 5 are dark
    for (const char* bus : {"680", "686", "701", "702"}) CHECK_FALSE(d.bus_energized[*n.bus_index(bus)]);
    for (std::size_t i = 0; i < n.buses().size(); ++i) {
        if (!d.bus_energized[i]) continue;
        for (Phase p : n.buses()[i].phases.phases()) {
            CHECK(d.w[i][p] >= 0.95 * 0.95 - 1e-9);
            CHECK(d.w[i][p] <= 1.05 * 1.05 + 1e-9);
        }
    }
}

TEST_CASE("dispatch is deterministic") {
    const Scenario sc = fixtures::ieee13();
    const NetworkModel& n = *sc.net;
    const auto a = dispatch_all(n, sc.bg, {1, 1, 0, 0, 0, 1}, substation_only(n));
    const auto b = dispatch_all(n, sc.bg, {1, 1, 0, 0, 0, 1}, substation_only(n));
    REQUIRE(a.feasible);
    for (std::size_t s = 0; s < n.sources().size(); ++s) CHECK(a.pg[s] == b.pg[s]);
    for (std::size_t i = 0; i < n.buses().size(); ++i) CHECK(a.w[i] == b.w[i]);
}

TEST_CASE("random radial islands satisfy drop and balance equations") {
    int feasible = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        CAPTURE(seed);
        const int buses = 2 + static_cast<int>(seed % 9);
        const NetworkModel n = NetworkModel::from_data(random_radial_island(seed, buses));
        const BlockGraph bg = identify_blocks(n);
        const DispatchSolution d = dispatch_all(n, bg, {}, substation_only(n));
        if (!d.feasible) continue;
        ++feasible;
        const DispatchResiduals r = dispatch_residuals(n, d);
        CHECK(r.voltage_drop <= 1e-7);
        CHECK(r.p_balance <= 1e-7);
        CHECK(r.q_balance <= 1e-7);
        for (std::size_t e = 0; e < n.edges().size(); ++e) {
            const Edge& ed = n.edges()[e];
            bool idle = true;
            for (Phase p : ed.phases.phases()) idle = idle && d.p[e][p] == 0.0 && d.q[e][p] == 0.0;
            if (idle)
                for (Phase p : ed.phases.phases()) CHECK(d.w[ed.from][p] == d.w[ed.to][p]);
        }
    }
    CHECK(feasible >= 50);
}
