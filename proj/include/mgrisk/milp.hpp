/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mgrisk/omcp.hpp"

namespace mgrisk {

/// In-memory MILP, the form written to MPS. Minimization.
struct MilpModel {
    enum class RowType : char { equal = 'E', less = 'L', greater = 'G' };

    struct Column {
        std::string name;
        bool integer = false;
        double lower = 0.0;
        double upper = kInf;
        double cost = 0.0;
    };
    struct Row {
        std::string name;
        RowType type = RowType::equal;
        double rhs = 0.0;
        std::vector<std::pair<std::size_t, double>> coefs;
    };

    std::string name = "OMCP";
    std::vector<Column> columns;
    std::vector<Row> rows;
    double objective_constant = 0.0;

    std::size_t add_column(std::string name, bool integer, double lower, double upper, double cost = 0.0);
    std::size_t add_row(std::string name, RowType type, double rhs, std::vector<std::pair<std::size_t, double>> coefs);
    std::size_t column(const std::string& name) const;  // throws std::out_of_range
    std::size_t row(const std::string& name) const;
    std::size_t integer_count() const;

 private:
    std::map<std::string, std::size_t> col_index_;
    std::map<std::string, std::size_t> row_index_;
};

/// Full OMCP: block/switch/inverter binaries, energized-forming products
/// zfe_<id>, single-commodity connectivity flow, forest row, risk row,
/// big-M LinDist3Flow and operating limits, and the selected objective.
MilpModel build_milp(const OmcpInstance& inst);

/// Fixed-format MPS. Names longer than eight characters push later fields right.
void write_mps(const MilpModel& m, std::ostream& out);
void export_milp(const OmcpInstance& inst, const std::filesystem::path& path);

/// Column values realizing a solver configuration in the MILP.
std::vector<double> milp_point(const MilpModel& m, const OmcpInstance& inst, const Configuration& c);

struct MilpCheck {
    double max_row_violation = 0.0;
    double max_bound_violation = 0.0;
    bool integral = true;
    double objective = 0.0;  // including the constant
    std::string worst_row;
};

MilpCheck check_point(const MilpModel& m, const std::vector<double>& x);

}  // namespace mgrisk
