/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

// Minimal free-standing MPS reader, written against the format description
// only, so the exporter can be checked without sharing its code.

#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mps {

struct Bound {
    double lower = 0.0;
    double upper = 1e300;
    bool fixed = false;
    bool binary = false;
};

struct Model {
    std::string name;
    std::string objective_row;
    std::map<std::string, char> row_type;  // excludes the objective
    std::vector<std::string> row_order;
    std::vector<std::string> columns;      // first-appearance order
    std::set<std::string> integer_columns;
    std::map<std::string, std::map<std::string, double>> coef;  // column -> row -> value
    std::map<std::string, double> rhs;
    std::map<std::string, Bound> bounds;
    bool saw_endata = false;
};

inline Model read(std::istream& in) {
    Model m;
    std::string line, section;
    bool in_int = false;
    auto fail = [](const std::string& msg) { throw std::runtime_error("mps: " + msg); };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ss(line);
        std::vector<std::string> f;
        for (std::string tok; ss >> tok;) f.push_back(tok);
        if (f.empty()) continue;
        if (line[0] != ' ') {
            section = f[0];
            if (section == "NAME") m.name = f.size() > 1 ? f[1] : "";
            if (section == "ENDATA") m.saw_endata = true;
            continue;
        }
        if (section == "ROWS") {
            if (f.size() != 2) fail("bad ROWS line: " + line);
            if (f[0] == "N") {
                if (m.objective_row.empty()) m.objective_row = f[1];
                continue;
            }
            if (m.row_type.count(f[1])) fail("duplicate row " + f[1]);
            m.row_type[f[1]] = f[0][0];
            m.row_order.push_back(f[1]);
        } else if (section == "COLUMNS") {
            if (f.size() >= 3 && f[1] == "'MARKER'") {
                if (f[2] == "'INTORG'") in_int = true;
                else if (f[2] == "'INTEND'") in_int = false;
                else fail("bad marker: " + line);
                continue;
            }
            if (f.size() != 3 && f.size() != 5) fail("bad COLUMNS line: " + line);
            const std::string& col = f[0];
            if (!m.coef.count(col)) {
                m.columns.push_back(col);
                m.coef[col];
                if (in_int) m.integer_columns.insert(col);
            }
            for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
                if (f[k] != m.objective_row && !m.row_type.count(f[k])) fail("unknown row " + f[k]);
                m.coef[col][f[k]] = std::stod(f[k + 1]);
            }
        } else if (section == "RHS") {
            if (f.size() != 3 && f.size() != 5) fail("bad RHS line: " + line);
            for (std::size_t k = 1; k + 1 < f.size(); k += 2) m.rhs[f[k]] = std::stod(f[k + 1]);
        } else if (section == "BOUNDS") {
            if (f.size() < 3) fail("bad BOUNDS line: " + line);
            const std::string& type = f[0];
            const std::string& col = f[2];
            if (!m.coef.count(col)) fail("bound on unknown column " + col);
            Bound& b = m.bounds[col];
            const double v = f.size() > 3 ? std::stod(f[3]) : 0.0;
            if (type == "UP") b.upper = v;
            else if (type == "LO") b.lower = v;
            else if (type == "FX") b.lower = b.upper = v, b.fixed = true;
            else if (type == "MI") b.lower = -1e300;
            else if (type == "BV") b.lower = 0, b.upper = 1, b.binary = true;
            else fail("unsupported bound type " + type);
        } else {
            fail("data outside a known section: " + line);
        }
    }
    return m;
}

}  // namespace mps
