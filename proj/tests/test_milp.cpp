/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "mgrisk/milp.hpp"
#include "mgrisk/solver.hpp"
#include "mps_reader.hpp"

using namespace mgrisk;

namespace {

mps::Model round_trip(const MilpModel& m) {
    std::stringstream ss;
    write_mps(m, ss);
    return mps::read(ss);
}

// Worst row violation of `x` evaluated through the parsed file, keyed by name.
double parsed_violation(const mps::Model& p, const MilpModel& m, const std::vector<double>& x) {
    std::map<std::string, double> act;
    for (std::size_t j = 0; j < m.columns.size(); ++j)
        for (const auto& [row, a] : p.coef.at(m.columns[j].name)) act[row] += a * x[j];
    double worst = 0;
    for (const auto& [row, type] : p.row_type) {
        const double lhs = act[row];
        const double rhs = p.rhs.count(row) ? p.rhs.at(row) : 0.0;
        double v = 0;
        if (type == 'E') v = std::abs(lhs - rhs);
        if (type == 'L') v = std::max(0.0, lhs - rhs);
        if (type == 'G') v = std::max(0.0, rhs - lhs);
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace

TEST_CASE("binary columns follow the block and switch lists") {
    const Scenario sc = fixtures::ieee13();
    const OmcpInstance inst =
        fixtures::instance(sc, Objective::vulnerability_weighted, Controllability::networking_microgrids, 0.5);
    const MilpModel m = build_milp(inst);
    for (int b = 1; b <= 6; ++b) {
        const auto& c = m.columns[m.column("zbl_" + std::to_string(b))];
        CHECK(c.integer);
        CHECK(c.cost == -inst.block_cost[static_cast<std::size_t>(b - 1)]);
    }
    for (int s = 1; s <= 6; ++s) CHECK(m.columns[m.column("zsw_sw" + std::to_string(s))].integer);
    CHECK(m.objective_constant == doctest::Approx(11.373).epsilon(1e-14));
    CHECK_THROWS_AS(m.column("zbl_7"), std::out_of_range);

    std::size_t inv = 0;
    for (const auto& c : m.columns) inv += c.name.rfind("zinv_", 0) == 0;
    CHECK(m.integer_count() == 12 + inv);
}

TEST_CASE("risk row carries the budget") {
    const Scenario sc = fixtures::ieee13();
    for (double t : {0.0, 0.25, 0.5, 1.0}) {
        CAPTURE(t);
        const MilpModel m = build_milp(
            fixtures::instance(sc, Objective::load_only, Controllability::networking_microgrids, t));
        const auto& r = m.rows[m.row("risk")];
        CHECK(r.type == MilpModel::RowType::less);
        CHECK(r.rhs == t * 854.0);
        const mps::Model p = round_trip(m);
        CHECK(p.row_type.at("risk") == 'L');
        CHECK(p.rhs.count("risk") ? p.rhs.at("risk") == t * 854.0 : t == 0.0);
    }
    // Without switch risk the total is the block risk alone.
    const MilpModel m = build_milp(fixtures::instance(sc, Objective::load_only, Controllability::networking_microgrids,
                                                      1.0, InstanceOptions{false, false}));
    CHECK(m.rows[m.row("risk")].rhs == 519.0);
}

TEST_CASE("static switches are written fixed open") {
    const Scenario sc = fixtures::ieee13();
    const MilpModel m =
        build_milp(fixtures::instance(sc, Objective::load_only, Controllability::static_microgrids, 0.5));
    const mps::Model p = round_trip(m);
    for (int s = 1; s <= 6; ++s) {
        const auto& b = p.bounds.at("zsw_sw" + std::to_string(s));
        CHECK(b.fixed);
        CHECK(b.lower == 0.0);
        CHECK(b.upper == 0.0);
    }
}

TEST_CASE("mps round trip keeps every column, row and coefficient") {
    const Scenario sc = fixtures::ieee13();
    const MilpModel m =
        build_milp(fixtures::instance(sc, Objective::vulnerability_weighted, Controllability::networking_microgrids, 0.5));
    const mps::Model p = round_trip(m);
    CHECK(p.saw_endata);
    CHECK(p.name == "OMCP");
    CHECK(p.objective_row == "obj");
    CHECK(p.columns.size() == m.columns.size());
    CHECK(p.row_type.size() == m.rows.size());
    CHECK(p.integer_columns.size() == m.integer_count());
    for (std::size_t i = 0; i < m.rows.size(); ++i) CHECK(p.row_order[i] == m.rows[i].name);

    std::size_t nz = 0, pnz = 0;
    for (const auto& r : m.rows) nz += r.coefs.size();
    for (const auto& [col, rows] : p.coef)
        for (const auto& [row, v] : rows) pnz += row != "obj";
    CHECK(pnz == nz);
    for (const auto& r : m.rows)
        for (const auto& [j, a] : r.coefs) CHECK(p.coef.at(m.columns[j].name).at(r.name) == a);
    for (const auto& c : m.columns) {
        const auto& row = p.coef.at(c.name);
        CHECK((row.count("obj") ? row.at("obj") : 0.0) == c.cost);
    }
}

TEST_CASE("solver optima are feasible MILP points with the same objective") {
    const Scenario sc = fixtures::ieee13();
    for (auto ctrl : {Controllability::no_microgrids, Controllability::static_microgrids,
                      Controllability::expanding_microgrids, Controllability::networking_microgrids})
        for (double t : {0.0, 0.3, 0.5, 0.8, 1.0}) {
            CAPTURE(to_string(ctrl));
            CAPTURE(t);
            const OmcpInstance inst = fixtures::instance(sc, Objective::vulnerability_weighted, ctrl, t);
            const SolveReport rep = solve(inst);
            const MilpModel m = build_milp(inst);
            const std::vector<double> x = milp_point(m, inst, rep.best);
            const MilpCheck chk = check_point(m, x);
            CHECK(chk.integral);
            CHECK(chk.max_row_violation <= 1e-9);
            CHECK(chk.max_bound_violation <= 1e-9);
            CHECK(std::abs(chk.objective - rep.shed_cost) <= 1e-9);
            CHECK(parsed_violation(round_trip(m), m, x) <= 1e-9);
        }
}

TEST_CASE("a configuration over budget violates the risk row") {
    const Scenario sc = fixtures::ieee13();
    const OmcpInstance inst =
        fixtures::instance(sc, Objective::load_only, Controllability::networking_microgrids, 1.0);
    Configuration all = solve(inst).best;
    REQUIRE(all.risk_fraction > 0.5 + 1e-3);
    const OmcpInstance tight =
        fixtures::instance(sc, Objective::load_only, Controllability::networking_microgrids, 0.5);
    const MilpModel m = build_milp(tight);
    const MilpCheck chk = check_point(m, milp_point(m, tight, all));
    CHECK(chk.max_row_violation > 1.0);
    CHECK(chk.worst_row == "risk");
}
